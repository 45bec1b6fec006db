#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "core/dynamics.hpp"
#include "core/error.hpp"
#include "core/filters.hpp"
#include "core/linalg.hpp"
#include "helpers.hpp"

using namespace mbl;

namespace {
struct Fixture4 {
  ChainModel model = build_heisenberg(4, 4.0, 1);
  EigenSystem eig = diagonalize(assemble(model));
  DenseOperator a = build_pauli(0, Axis::X, 4);
};
}  // namespace

TEST(Gaussian, WideFilterIsIdentity) {
  Fixture4 f;
  EXPECT_EQ(gaussian_multiplier(3.0, 1e30), 1.0);
  EXPECT_LT(max_abs(gaussian_filter(f.a, f.eig, 1e30).entries - f.a.entries), 1e-12);
}

TEST(Gaussian, NarrowFilterDephases) {
  Fixture4 f;
  const Mat a_eig = f.eig.to_eigenbasis(f.a.entries);
  const Mat want = f.eig.from_eigenbasis(Mat(a_eig.diagonal().asDiagonal()));
  EXPECT_LT(max_abs(gaussian_filter(f.a, f.eig, 1e-9).entries - want), 1e-12);
}

TEST(Gaussian, MatchesQuadratureOracle) {
  Fixture4 f;
  const Mat h = testing_helpers::oracle_hamiltonian(f.model);
  const Mat q = oracle::gaussian_quadrature(h, f.a.entries, 1.0, 0.0, 8.0, 1e-3);
  EXPECT_LE(oracle::max_entry(gaussian_filter(f.a, f.eig, 1.0).entries - q), 1e-6);
}

TEST(Shifted, ZeroShiftIsGaussian) {
  Fixture4 f;
  EXPECT_LT(max_abs(shifted_gaussian_filter(f.a, f.eig, 0.7, 0.0).entries -
                    gaussian_filter(f.a, f.eig, 0.7).entries),
            1e-15);
}

TEST(Shifted, SelectedElementPreserved) {
  Fixture4 f;
  const Eigen::Index k = 2, l = 9;
  const double shift = f.eig.energies(l) - f.eig.energies(k);
  const Mat out = f.eig.to_eigenbasis(shifted_gaussian_filter(f.a, f.eig, 0.05, shift).entries);
  const Mat in = f.eig.to_eigenbasis(f.a.entries);
  EXPECT_NEAR(std::abs(out(k, l) - in(k, l)), 0.0, 1e-12);
}

TEST(Shifted, MatchesQuadratureOracle) {
  Fixture4 f;
  const Mat h = testing_helpers::oracle_hamiltonian(f.model);
  const Mat q = oracle::gaussian_quadrature(h, f.a.entries, 0.5, 1.3, 8.0, 1e-3);
  EXPECT_LE(oracle::max_entry(shifted_gaussian_filter(f.a, f.eig, 0.5, 1.3).entries - q), 1e-6);
}

TEST(HighPass, MultiplierValues) {
  EXPECT_DOUBLE_EQ(highpass_multiplier(0.0, 0.7), 0.5);
  const double alpha = 0.4;
  EXPECT_LE(1.0 - highpass_multiplier(6.0 * std::sqrt(alpha), alpha), 0.5 * std::exp(-9.0));
  EXPECT_LE(highpass_multiplier(-6.0 * std::sqrt(alpha), alpha), 0.5 * std::exp(-9.0));
}

TEST(HighPass, ExactPrincipalValueQuadrature) {
  // With a vanishing excision the folded quadrature is the principal value itself.
  Fixture4 f;
  const Mat h = testing_helpers::oracle_hamiltonian(f.model);
  const Mat q = oracle::highpass_quadrature(h, f.a.entries, 0.3, 1e-9, 10.0, 1e-3);
  EXPECT_LE(oracle::max_entry(highpass_filter(f.a, f.eig, 0.3).entries - q), 1e-6);
}

TEST(HighPass, RegularizedQuadratureBias) {
  // Excising |t| < eps shifts element (r, s) by about eps (E_s - E_r) A_rs / pi.
  Fixture4 f;
  const double eps = 1e-4, alpha = 0.3;
  const Mat h = testing_helpers::oracle_hamiltonian(f.model);
  const Mat q = oracle::highpass_quadrature(h, f.a.entries, alpha, eps, 8.0, 1e-3);
  const Mat closed = highpass_filter(f.a, f.eig, alpha).entries;
  const Mat a_eig = f.eig.to_eigenbasis(f.a.entries);
  Mat predicted = a_eig;
  for (Eigen::Index r = 0; r < a_eig.rows(); ++r)
    for (Eigen::Index s = 0; s < a_eig.cols(); ++s)
      predicted(r, s) *= -eps * (f.eig.energies(s) - f.eig.energies(r)) / std::numbers::pi;
  EXPECT_LE(oracle::max_entry(q - closed - f.eig.from_eigenbasis(predicted)), 1e-7);
}

TEST(Constant, Properties) {
  const auto model = build_heisenberg(4, 3.0, 2);
  const auto h = assemble(model);
  const auto eig = diagonalize(h);
  EXPECT_LT(max_abs(constant_filter(h, eig).entries - h.entries), 1e-12);
  const auto a = build_pauli(1, Axis::X, 4);
  const Mat c = constant_filter(a, eig).entries;
  EXPECT_LE(spectral_norm(commutator(c, h.entries)), 1e-10);
  const Mat a_eig = eig.to_eigenbasis(a.entries);
  EXPECT_LT(max_abs(eig.to_eigenbasis(c) - Mat(a_eig.diagonal().asDiagonal())), 1e-12);
}

TEST(Constant, DegenerateClustersKept) {
  const auto model = build_heisenberg(3, 0.0, 1);
  const auto h = assemble(model);
  const auto eig = diagonalize(h);
  const auto a = build_pauli(0, Axis::X, 3);
  EXPECT_LE(spectral_norm(commutator(constant_filter(a, eig).entries, h.entries)), 1e-10);
}

TEST(Oracle, LibraryQuadratureMatchesEigenbasis) {
  const auto model = build_heisenberg(2, 1.0, 3);
  const auto eig = diagonalize(assemble(model));
  const auto a = build_pauli(0, Axis::X, 2);
  const auto q = time_domain_oracle(a, eig, {FilterFamily::Gaussian, 1.0, 0.0});
  EXPECT_LE(max_abs(q.entries - gaussian_filter(a, eig, 1.0).entries), 1e-6);
  const auto qs = time_domain_oracle(a, eig, {FilterFamily::ShiftedGaussian, 0.5, -0.8});
  EXPECT_LE(max_abs(qs.entries - shifted_gaussian_filter(a, eig, 0.5, -0.8).entries), 1e-6);
  QuadratureSpec tight;
  tight.epsilon = 1e-9;
  tight.cutoff = 10.0;
  const auto qh = time_domain_oracle(a, eig, {FilterFamily::HighPass, 0.3, 0.0}, tight);
  EXPECT_LE(max_abs(qh.entries - highpass_filter(a, eig, 0.3).entries), 1e-6);
}

TEST(Oracle, ShiftSignConvention) {
  // Single element <k|.|l> with the shift set to E_l - E_k keeps weight 1.
  const auto model = build_heisenberg(2, 1.0, 3);
  const auto eig = diagonalize(assemble(model));
  const auto a = build_pauli(0, Axis::X, 2);
  const Mat in = eig.to_eigenbasis(a.entries);
  Eigen::Index k = 0, l = 0;
  in.cwiseAbs().maxCoeff(&k, &l);
  ASSERT_NE(k, l);
  const double shift = eig.energies(l) - eig.energies(k);
  const auto q = time_domain_oracle(a, eig, {FilterFamily::ShiftedGaussian, 0.2, shift}, {10.0, 1e-3, 1e-8, 1e-4});
  EXPECT_NEAR(std::abs(eig.to_eigenbasis(q.entries)(k, l) - in(k, l)), 0.0, 1e-8);
}

TEST(Oracle, Rejections) {
  const auto eig = diagonalize(assemble(build_heisenberg(2, 1.0, 3)));
  const auto a = build_pauli(0, Axis::X, 2);
  EXPECT_THROW(time_domain_oracle(a, eig, {FilterFamily::Constant, 1.0, 0.0}), Error);
  EXPECT_THROW(time_domain_oracle(a, eig, {FilterFamily::Gaussian, 1.0, 0.0}, {8.0, 1e-7, 1e-6, 1e-4}), Error);
  EXPECT_THROW(time_domain_oracle(a, eig, {FilterFamily::Gaussian, 0.01, 0.0}), Error);
}

TEST(Decoupled, NarrowLimitAndBound) {
  for (std::uint64_t seed : {1u, 2u}) {
    const auto model = build_heisenberg(6, 4.0, seed);
    const auto split = split_regions(model, {0}, {5});
    const auto a = embed(pauli_matrix(Axis::X), {0}, split.region_a);
    const auto b = embed(pauli_matrix(Axis::X), {5}, split.region_b);
    for (double alpha : {1e-2, 1e-3}) {
      const auto r = decoupled_filter_check(a, b, split.h_a, split.h_b, alpha);
      EXPECT_LE(r.error_norm, r.bound);
      EXPECT_EQ(r.n_sites, 6);
    }
    const auto probe = decoupled_filter_check(a, b, split.h_a, split.h_b, 1.0);
    const auto lim = decoupled_filter_check(a, b, split.h_a, split.h_b, 1e-6 * probe.xi_gap * probe.xi_gap);
    EXPECT_LE(lim.error_norm, 1e-8);
  }
}

TEST(Decoupled, DiagonalObservablesFactorize) {
  const auto model = build_heisenberg(6, 4.0, 3);
  const auto split = split_regions(model, {0}, {5});
  const auto ea = diagonalize(split.h_a);
  const auto eb = diagonalize(split.h_b);
  // Functions of the local Hamiltonians are diagonal in the product eigenbasis.
  const DenseOperator a{ea.from_eigenbasis(Mat(ea.energies.cast<cplx>().asDiagonal())), split.region_a, split.region_a};
  const DenseOperator b{eb.from_eigenbasis(Mat(eb.energies.cwiseAbs().cast<cplx>().asDiagonal())), split.region_b, split.region_b};
  for (double alpha : {1e-3, 1.0, 100.0})
    EXPECT_LE(decoupled_filter_check(a, b, split.h_a, split.h_b, alpha).error_norm, 1e-12);
}

TEST(Decoupled, OverlappingSpacesRejected) {
  const auto model = build_heisenberg(6, 4.0, 3);
  const auto ha = restrict_hamiltonian_local(model, {0}, 2);
  const auto hb = restrict_hamiltonian_local(model, {3}, 1);
  const auto a = embed(pauli_matrix(Axis::X), {0}, ha.space);
  const auto b = embed(pauli_matrix(Axis::X), {3}, hb.space);
  EXPECT_THROW(decoupled_filter_check(a, b, ha, hb, 0.1), Error);
}

TEST(HastingsKoma, Grid) {
  int cases = 0;
  for (double e : {-3.0, -1.0, -0.5, 0.5, 1.0, 3.0})
    for (double alpha : {0.1, 1.0, 10.0}) {
      const auto r = hastings_koma_check(e, alpha, std::abs(e));
      EXPECT_TRUE(r.holds) << "E=" << e << " alpha=" << alpha;
      EXPECT_GE(r.slack, -1e-12);
      ++cases;
    }
  EXPECT_EQ(cases, 18);
}

TEST(HastingsKoma, BoundaryValue) {
  // At E = -gamma the integral is 1/2 erfc(gamma / (2 sqrt(alpha))), below the bound.
  for (double alpha : {0.1, 1.0, 10.0}) {
    const auto r = hastings_koma_check(-1.0, alpha, 1.0);
    EXPECT_NEAR(r.value, 0.5 * std::erfc(1.0 / (2.0 * std::sqrt(alpha))), 1e-15);
    EXPECT_GE(r.slack, 0.0);
  }
}

TEST(HastingsKoma, BranchPrecondition) {
  EXPECT_THROW(hastings_koma_check(0.0, 1.0, 0.1), Error);
}

TEST(Locality, IdentityAndAlphaScaling) {
  const auto model = build_ising(5, 2.0, 1);
  const auto eig = diagonalize(assemble(model));
  const auto a = build_pauli(0, Axis::X, 5);
  DenseOperator id{Mat::Identity(32, 32), {}, site_range(0, 5)};
  EXPECT_LE(highpass_locality_probe(3, a, id, eig, 0.5, 1.0, 4).value, 1e-14);
  const double b1 = highpass_locality_probe(0, a, id, eig, 0.5, 1.0, 4).bound;
  const double b2 = highpass_locality_probe(0, a, id, eig, 0.25, 1.0, 4).bound;
  EXPECT_NEAR((b2 - b1) * std::exp(4.0), std::log(2.0) / (2.0 * std::numbers::pi), 1e-12);
}

TEST(Locality, IsingFarPairBelowBound) {
  const auto model = build_ising(6, 3.0, 2);
  const auto eig = diagonalize(assemble(model));
  const auto a = build_pauli(0, Axis::X, 6);
  const auto b = build_pauli(5, Axis::X, 6);
  const auto series = truncation_series(model, a, eig, {0, 1, 2, 3, 4, 5}, geometric_time_grid());
  const auto fit = exact_localization_fit(series);
  for (Eigen::Index k = 0; k < eig.dim(); k += 7) {
    const auto p = highpass_locality_probe(k, a, b, eig, 0.5, fit.mu, 5);
    EXPECT_LE(p.value, fit.c * p.bound + 1e-12);
  }
}
