#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "core/error.hpp"
#include "core/mps.hpp"
#include "helpers.hpp"

using namespace mbl;

namespace {
Vec basis(double theta, double phi) {
  Vec v(2);
  v << std::cos(theta), std::polar(std::sin(theta), phi);
  return v;
}
}  // namespace

TEST(Mps, ProductStateHasUnitBonds) {
  std::vector<Vec> locals;
  for (int i = 0; i < 8; ++i) locals.push_back(basis(0.3 * i, 0.1 * i));
  const Vec psi = testing_helpers::product_state(locals);
  for (const TruncationPolicy p : {TruncationPolicy{}, TruncationPolicy{3, 0.0}, TruncationPolicy{0, 1e-3}}) {
    const auto m = dense_to_mps(psi, 8, p);
    for (int d : m.bond_dims) EXPECT_EQ(d, 1);
    for (double w : m.discarded) EXPECT_LE(w, 1e-28);
    EXPECT_NEAR(mps_fidelity(m, psi), 1.0, 1e-12);
  }
  EXPECT_NEAR(entanglement_entropy(psi, 4), 0.0, 1e-12);
}

TEST(Mps, FullRankRoundTrip) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Vec psi = testing_helpers::random_state(1024, seed);
    const auto m = dense_to_mps(psi, 10, {});
    EXPECT_GE(mps_fidelity(m, psi), 1.0 - 1e-10);
    EXPECT_LT((mps_to_dense(m) - psi).norm(), 1e-10);
    EXPECT_EQ(m.bond_dims[5], 32);
  }
}

TEST(Mps, TruncationFidelityAccounting) {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const Vec psi = testing_helpers::random_state(1024, seed);
    for (int d : {1, 2, 4, 8, 16}) {
      const auto m = dense_to_mps(psi, 10, {d, 0.0});
      EXPECT_LE(1.0 - mps_fidelity(m, psi), m.total_discarded() + 1e-9) << "D=" << d;
      for (int b : m.bond_dims) EXPECT_LE(b, d);
    }
  }
}

TEST(Mps, WeightThreshold) {
  const Vec psi = testing_helpers::random_state(256, 3);
  const auto m = dense_to_mps(psi, 8, {0, 1e-2});
  for (double w : m.discarded) EXPECT_LE(w, 1e-2 + 1e-15);
  EXPECT_LE(1.0 - mps_fidelity(m, psi), m.total_discarded() + 1e-9);
}

TEST(Mps, OrthogonalFidelityZero) {
  Vec a = Vec::Zero(16), b = Vec::Zero(16);
  a(3) = 1.0;
  b(12) = 1.0;
  EXPECT_LE(mps_fidelity(dense_to_mps(a, 4, {}), b), 1e-12);
}

TEST(Mps, UnnormalizedRejected) {
  Vec a = Vec::Ones(8);
  EXPECT_THROW(dense_to_mps(a, 3, {}), Error);
  EXPECT_THROW(dense_to_mps(Vec::Ones(6) / std::sqrt(6.0), 3, {}), Error);
}

TEST(Entropy, SingletIsOneBit) {
  Vec s = Vec::Zero(4);
  s(1) = 1.0 / std::sqrt(2.0);
  s(2) = -1.0 / std::sqrt(2.0);
  EXPECT_NEAR(entanglement_entropy(s, 1), 1.0, 1e-14);
  const auto p = entropy_profile(s);
  ASSERT_EQ(p.entropies.size(), 1u);
  EXPECT_NEAR(p.cut_average, 1.0, 1e-14);
}

TEST(Entropy, MatchesPartialTraceOracle) {
  const Vec psi = testing_helpers::random_state(64, 21);
  const Mat rho = psi * psi.adjoint();
  const Mat red = oracle::partial_trace(rho, 6, {0, 1});
  Eigen::SelfAdjointEigenSolver<Mat> es(red);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 1e-15) s -= l * std::log2(l);
  }
  EXPECT_NEAR(entanglement_entropy(psi, 2), s, 1e-12);
}

TEST(SmoothMax, Examples) {
  EXPECT_EQ(smooth_max_entropy({1.0, 0.0, 0.0}, 0.3), 0.0);
  EXPECT_NEAR(smooth_max_entropy({0.25, 0.25, 0.25, 0.25}, 0.2), 2.0, 1e-15);
  EXPECT_NEAR(smooth_max_entropy({0.7, 0.2, 0.06, 0.04}, 0.1), 1.0, 1e-15);
  EXPECT_THROW(smooth_max_entropy({0.5, 0.2}, 0.1), Error);
}

TEST(Corollary, ExponentIdentity) {
  const double mu = 2.0 / std::log2(std::exp(1.0));
  const auto e = corollary_bond_dimension(12, 0.01, mu, 2.0, 1.0, 1.0);
  EXPECT_NEAR(e.xi_corr, 1.0, 1e-12);
  EXPECT_NEAR(e.exponent, 8.0, 1e-12);
  for (double m : {0.3, 1.0, 2.5}) EXPECT_LE(corollary_bond_dimension(12, 0.01, m, 2, 1, 1).identity_error, 1e-12);
}

TEST(Corollary, DoublingSystemSize) {
  const auto a = corollary_bond_dimension(12, 0.01, 1.0, 2.0, 1.0, 1.0);
  const auto b = corollary_bond_dimension(24, 0.01, 1.0, 2.0, 1.0, 1.0);
  EXPECT_NEAR(b.log2_d - a.log2_d, 8.0 * a.xi_corr, 1e-10);
}

TEST(Corollary, IndependentArithmetic) {
  const double n = 12, eps = 0.01, mu = 1.0, big_c = 2.0, c = 1.0, cp = 1.0;
  const double xi = 2.0 / (mu * std::log2(std::exp(1.0)));
  const double log2_d = cp * std::pow(xi, c * xi + 1.0) * std::log2(big_c) + 8.0 * xi * std::log2(3.0 * n / eps);
  const auto e = corollary_bond_dimension(n, eps, mu, big_c, c, cp);
  EXPECT_NEAR(e.log2_d, log2_d, 1e-12 * log2_d);
  EXPECT_NEAR(e.d, std::exp2(log2_d), 1e-10 * std::exp2(log2_d));
}

TEST(Export, WritesTensorsAndSidecar) {
  const Vec psi = testing_helpers::random_state(16, 2);
  const auto m = dense_to_mps(psi, 4, {2, 0.0});
  const auto path = (std::filesystem::temp_directory_path() / "mblab_export_test.bin").string();
  export_mps(m, path);
  std::size_t expected = 0;
  for (const auto& t : m.tensors) expected += 3 * 8 + t.data.size() * 16;
  EXPECT_EQ(std::filesystem::file_size(path), expected);
  std::ifstream side(path + ".txt");
  EXPECT_TRUE(side.good());
  std::filesystem::remove(path);
  std::filesystem::remove(path + ".txt");
}
