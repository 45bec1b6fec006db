#include <gtest/gtest.h>

#include "core/dynamics.hpp"
#include "core/error.hpp"
#include "core/linalg.hpp"
#include "helpers.hpp"

using namespace mbl;

TEST(Evolve, TimeZeroAndConservedGenerator) {
  const auto model = build_heisenberg(5, 3.0, 2);
  const auto h = assemble(model);
  const auto eig = diagonalize(h);
  const auto a = build_pauli(1, Axis::X, 5);
  EXPECT_LT(max_abs(evolve_observable(a, eig, 0.0).entries - a.entries), 1e-13);
  for (double t : {0.5, 3.0, 40.0})
    EXPECT_LT(max_abs(evolve_observable(h, eig, t).entries - h.entries), 1e-11);
}

TEST(Evolve, MatchesMatrixExponential) {
  const auto model = build_heisenberg(4, 2.0, 5);
  const auto eig = diagonalize(assemble(model));
  const Mat h = testing_helpers::oracle_hamiltonian(model);
  const auto a = build_pauli(0, Axis::X, 4);
  for (double t : {0.3, 1.7, 9.0})
    EXPECT_LT(max_abs(evolve_observable(a, eig, t).entries - oracle::evolve(h, a.entries, t)), 1e-9);
}

TEST(TimeGrid, Geometric) {
  const auto g = geometric_time_grid();
  const std::vector<double> want{0, 0.25, 0.5, 1, 2, 4, 8, 16, 32, 64, 100};
  EXPECT_EQ(g, want);
}

TEST(Truncation, FullRadiusIsZero) {
  const auto model = build_heisenberg(5, 2.0, 3);
  const auto a = build_pauli(2, Axis::X, 5);
  EXPECT_LE(truncation_probe(model, a, 5, 3.0), 1e-10);
}

TEST(Truncation, IsingExactlyLocalized) {
  const auto model = build_ising(6, 3.0, 4);
  const auto a = build_pauli(0, Axis::X, 6);
  for (double t : {0.0, 1.0, 17.0, 100.0}) EXPECT_LE(truncation_probe(model, a, 1, t), 1e-10);
  EXPECT_GT(truncation_probe(model, a, 0, 1.0), 1e-3);
}

TEST(Truncation, CleanHeisenbergSpreads) {
  const auto model = build_heisenberg(8, 0.0, 1);
  EXPECT_GT(truncation_probe(model, build_pauli(0, Axis::X, 8), 2, 4.0), 1e-3);
}

TEST(Truncation, SeriesAgreesWithDirectOracle) {
  const auto model = build_heisenberg(5, 2.0, 8);
  const auto eig = diagonalize(assemble(model));
  const auto a = build_pauli(1, Axis::Z, 5);
  const Mat h = testing_helpers::oracle_hamiltonian(model);
  const auto series = truncation_series(model, a, eig, {0, 1, 2}, {0.5, 2.0});
  ASSERT_EQ(series.samples.size(), 6u);
  for (const auto& s : series.samples) {
    const Mat hl = restrict_hamiltonian(model, {1}, s.distance).entries;
    const Mat diff = oracle::evolve(h, a.entries, s.t) - oracle::evolve(hl, a.entries, s.t);
    EXPECT_NEAR(s.value, oracle::spectral_norm(diff), 1e-9) << "l=" << s.distance << " t=" << s.t;
    EXPECT_NEAR(s.value, truncation_probe(model, a, s.distance, s.t), 1e-9);
  }
}

TEST(Commutator, TrivialCases) {
  const auto model = build_heisenberg(5, 2.0, 3);
  const auto eig = diagonalize(assemble(model));
  const auto a = build_pauli(0, Axis::X, 5);
  EXPECT_LE(commutator_probe(a, build_pauli(4, Axis::Z, 5), eig, 0.0), 1e-13);
  DenseOperator id{Mat::Identity(32, 32), {}, site_range(0, 5)};
  for (double t : {0.0, 2.0, 50.0}) EXPECT_LE(commutator_probe(a, id, eig, t), 1e-12);
}

TEST(Commutator, BoundedByTwiceTruncation) {
  // At l = d - 1 the truncated evolution of A commutes with B exactly.
  const auto model = build_heisenberg(6, 1.0, 2);
  const auto eig = diagonalize(assemble(model));
  const auto a = build_pauli(0, Axis::X, 6);
  for (int d = 1; d < 6; ++d) {
    const auto b = build_pauli(d, Axis::Z, 6);
    for (double t : {0.5, 2.0, 10.0})
      EXPECT_LE(commutator_probe(a, b, eig, t), 2.0 * truncation_probe(model, a, d - 1, t) + 1e-10);
  }
}

TEST(Excitation, Cases) {
  const auto model = build_ising(5, 2.0, 6);
  const auto eig = diagonalize(assemble(model));
  const Vec psi = testing_helpers::random_state(32, 3);
  const auto z0 = build_pauli(0, Axis::Z, 5);
  EXPECT_LE(excitation_probe(psi, build_pauli(1, Axis::X, 5), z0, eig, 0.0, 1.0), 1e-14);
  EXPECT_LE(excitation_probe(psi, z0, z0, eig, 0.7, 3.0), 1e-10);
  DenseOperator g = build_pauli(2, Axis::X, 5);
  g.entries *= 2.0;
  EXPECT_THROW(excitation_probe(psi, g, z0, eig, 0.5, 1.0), Error);
}

TEST(Excitation, BoundedByCommutator) {
  const auto model = build_heisenberg(5, 1.0, 4);
  const auto eig = diagonalize(assemble(model));
  const Vec psi = testing_helpers::random_state(32, 8);
  const auto g = build_pauli(4, Axis::X, 5);
  const auto a = build_pauli(0, Axis::Z, 5);
  for (double s : {0.1, 0.5, 1.0})
    for (double t : {0.5, 3.0}) {
      const Mat at = evolve_observable(a, eig, t).entries;
      EXPECT_LE(excitation_probe(psi, g, a, eig, s, t), s * spectral_norm(commutator(g.entries, at)) + 1e-10);
    }
}

TEST(Subspace, LimitsAndRankOne) {
  const auto model = build_heisenberg(4, 2.0, 1);
  const auto eig = diagonalize(assemble(model));
  const auto a = build_pauli(0, Axis::X, 4);
  const auto b = build_pauli(3, Axis::X, 4);
  const double t = 2.5;
  EXPECT_NEAR(subspace_probe(a, b, eig, t, eig.energies(15) + 1.0), commutator_probe(a, b, eig, t), 1e-12);
  EXPECT_THROW(subspace_probe(a, b, eig, t, eig.energies(0) - 1.0), Error);
  const Mat at = oracle::evolve(testing_helpers::oracle_hamiltonian(model), a.entries, t);
  const Vec k0 = eig.state(0);
  const double direct = std::abs((k0.adjoint() * (at * b.entries - b.entries * at) * k0)(0, 0));
  EXPECT_NEAR(subspace_probe(a, b, eig, t, eig.energies(0)), direct, 1e-9);
}

TEST(Fit, ZeroVelocitySynthetic) {
  ProbeSeries s;
  for (int l = 0; l < 6; ++l)
    for (double t : {1.0, 5.0}) s.samples.push_back({l, t, 2.0 * std::exp(-0.7 * l) * (t > 2 ? 1.0 : 0.5)});
  const auto f = fit_localization(s, FitAnsatz::ZeroVelocity);
  EXPECT_NEAR(f.c, 2.0, 1e-10);
  EXPECT_NEAR(f.mu, 0.7, 1e-10);
  EXPECT_LE(f.residual, 1e-10);
}

TEST(Fit, BallisticSynthetic) {
  ProbeSeries s;
  for (int l = 0; l < 8; ++l)
    for (double t : {0.25, 0.5, 1.0, 2.0}) s.samples.push_back({l, t, std::exp(-(l - 2.0 * t))});
  const auto f = fit_localization(s, FitAnsatz::Ballistic);
  EXPECT_NEAR(f.v, 2.0, 1e-10);
  EXPECT_NEAR(f.mu, 1.0, 1e-10);
  EXPECT_NEAR(f.c, 1.0, 1e-10);
}

TEST(Fit, TooFewDistances) {
  ProbeSeries s;
  s.samples = {{0, 1.0, 1.0}, {1, 1.0, 0.5}};
  try {
    fit_localization(s, FitAnsatz::ZeroVelocity);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
  }
}

TEST(Fit, ExactEnvelope) {
  ProbeSeries s;
  for (int l = 0; l < 5; ++l) s.samples.push_back({l, 1.0, l == 0 ? 1.5 : 1e-13});
  const auto f = exact_localization_fit(s);
  EXPECT_DOUBLE_EQ(f.c, 1.5);
  EXPECT_NEAR(f.c * std::exp(-f.mu), 1e-10, 1e-22);
  s.samples.push_back({3, 2.0, 1e-3});
  EXPECT_THROW(exact_localization_fit(s), Error);
}

TEST(Fit, StrongDisorderHasPositiveMu) {
  const auto model = build_heisenberg(8, 8.0, 1);
  const auto eig = diagonalize(assemble(model));
  const auto series = truncation_series(model, build_pauli(4, Axis::X, 8), eig, {0, 1, 2, 3, 4},
                                        geometric_time_grid());
  const auto f = fit_localization(series, FitAnsatz::ZeroVelocity);
  RecordProperty("mu", std::to_string(f.mu));
  RecordProperty("residual", std::to_string(f.residual));
  EXPECT_GT(f.mu, 0.0);
}
