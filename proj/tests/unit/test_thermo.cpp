#include <gtest/gtest.h>

#include <cmath>

#include "core/dynamics.hpp"
#include "core/error.hpp"
#include "core/linalg.hpp"
#include "core/thermo.hpp"
#include "helpers.hpp"

using namespace mbl;

TEST(Gibbs, HighTemperatureIsMaximallyMixed) {
  const auto eig = diagonalize(assemble(build_heisenberg(4, 2.0, 1)));
  EXPECT_LT(max_abs(gibbs_state(eig, 1e-12) - Mat::Identity(16, 16) / 16.0), 1e-10);
}

TEST(Gibbs, LowTemperatureIsGroundState) {
  const auto eig = diagonalize(assemble(build_heisenberg(4, 2.0, 1)));
  const Mat rho = gibbs_state(eig, 1e3);
  const Vec g = eig.state(0);
  const double gamma = eig.energies(1) - eig.energies(0);
  EXPECT_LT(max_abs(rho - g * g.adjoint()), 16.0 * std::exp(-1e3 * gamma) + 1e-14);
}

TEST(Gibbs, TwoLevelPopulations) {
  Mat h = Mat::Zero(2, 2);
  h(1, 1) = 1.0;
  const Mat rho = gibbs_state(diagonalize(h), 1.0);
  const double z = 1.0 + std::exp(-1.0);
  EXPECT_NEAR(rho(0, 0).real(), 1.0 / z, 1e-15);
  EXPECT_NEAR(rho(1, 1).real(), std::exp(-1.0) / z, 1e-15);
}

TEST(PartialTrace, Cases) {
  const Mat rho1 = testing_helpers::random_hermitian(2, 1).cwiseAbs2().cast<cplx>();
  Mat r1 = rho1 + rho1.adjoint() + 4.0 * Mat::Identity(2, 2);
  r1 /= r1.trace();
  Mat r2 = Mat::Identity(4, 4);
  r2(0, 3) = r2(3, 0) = 0.5;
  r2 /= r2.trace();
  Mat prod(8, 8);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) prod.block(4 * i, 4 * j, 4, 4) = r1(i, j) * r2;
  EXPECT_LT(max_abs(partial_trace(prod, {0, 1, 2}, {0}) - r1), 1e-15);
  EXPECT_LT(max_abs(partial_trace(prod, {0, 1, 2}, {0, 1, 2}) - prod), 1e-15);
  EXPECT_LT(max_abs(partial_trace(prod, {0, 1, 2}, {1, 2}) - r2), 1e-15);

  Vec bell = Vec::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  EXPECT_LT(max_abs(partial_trace(bell * bell.adjoint(), {0, 1}, {1}) - 0.5 * Mat::Identity(2, 2)), 1e-15);

  const Vec psi = testing_helpers::random_state(32, 5);
  const Mat rho = psi * psi.adjoint();
  EXPECT_LT(max_abs(partial_trace(rho, site_range(0, 5), {1, 3}) - oracle::partial_trace(rho, 5, {1, 3})), 1e-14);
}

TEST(Perturbed, MaximallyMixedAndPure) {
  const Mat mixed = Mat::Identity(8, 8) / 8.0;
  EXPECT_NEAR(perturbed_initial(mixed, site_range(0, 3), {1}).x, 1.0, 1e-14);
  Vec p = Vec::Zero(8);
  p(5) = 1.0;
  const auto pure = perturbed_initial(p * p.adjoint(), site_range(0, 3), {2});
  EXPECT_NEAR(pure.lambda_min, 0.0, 1e-15);
  EXPECT_NEAR(pure.x, 2.0, 1e-14);
}

TEST(Perturbed, TraceDistanceEqualsX) {
  const auto eig = diagonalize(assemble(build_heisenberg(6, 4.0, 1)));
  const Mat rho = gibbs_state(eig, 1.0);
  const auto st = perturbed_initial(rho, site_range(0, 6), {2});
  EXPECT_NEAR(trace_norm(st.rho_a - st.xi_a), st.x, 1e-10);
  const Mat w = trace_distance_witness(st.rho_a, st.xi_a);
  EXPECT_NEAR(((st.rho_a - st.xi_a) * w).trace().real(), st.x, 1e-10);
}

TEST(Thermalization, InitialDistanceAtZeroPadding) {
  const auto model = build_heisenberg(5, 4.0, 2);
  const auto eig = diagonalize(assemble(model));
  const auto st = perturbed_initial(gibbs_state(eig, 1.0), site_range(0, 5), {2});
  const auto p = thermalization_probe(model, eig, 1.0, {2}, 0, {0.0});
  EXPECT_EQ(p.region_b, SiteSet{2});
  EXPECT_NEAR(p.distances[0], st.x, 1e-10);
}

TEST(Thermalization, IsingFrozen) {
  const auto model = build_ising(6, 4.0, 3);
  const auto eig = diagonalize(assemble(model));
  const auto p = thermalization_probe(model, eig, 1.0, {0}, 1, geometric_time_grid());
  for (double d : p.distances) EXPECT_NEAR(d, p.distances[0], 1e-10);
}

TEST(Thermalization, BoundFromFit) {
  const auto model = build_heisenberg(6, 8.0, 1);
  const auto eig = diagonalize(assemble(model));
  LocalizationFit fit;
  fit.c = 1.0;
  fit.mu = 1.0;
  const auto p = thermalization_probe(model, eig, 1.0, {2}, 1, {0.0, 1.0}, fit);
  ASSERT_TRUE(p.bound.has_value());
  EXPECT_NEAR(*p.bound, p.x - std::exp(-1.0), 1e-15);
  EXPECT_THROW(thermalization_probe(model, eig, 1.0, {2}, 4, {0.0}), Error);
}
