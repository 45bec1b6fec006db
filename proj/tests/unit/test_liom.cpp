#include <gtest/gtest.h>

#include "core/error.hpp"
#include "core/linalg.hpp"
#include "core/liom.hpp"
#include "helpers.hpp"

using namespace mbl;

TEST(Liom, ZeroAlphaConservedAndSumsToH) {
  const auto model = build_heisenberg(5, 3.0, 2);
  const auto h = assemble(model);
  const auto eig = diagonalize(h);
  Mat sum = Mat::Zero(32, 32);
  for (std::size_t j = 0; j < model.terms.size(); ++j) {
    const auto m = build_liom(model, eig, j, 0.0);
    EXPECT_LE(liom_conservation(m, h), 1e-10);
    sum += m.entries;
  }
  EXPECT_LT(max_abs(sum - h.entries), 1e-10);
  EXPECT_THROW(build_liom(model, eig, 0, -1.0), Error);
}

TEST(Liom, CommutingTermUnchanged) {
  const auto model = build_ising(5, 2.0, 3);
  const auto h = assemble(model);
  const auto eig = diagonalize(h);
  for (double alpha : {0.0, 0.01, 1.0}) {
    const auto m = build_liom(model, eig, 1, alpha);
    EXPECT_LT(max_abs(m.entries - term_operator(model, 1).entries), 1e-12);
  }
  EXPECT_LE(liom_conservation(h, h), 1e-12);
}

TEST(Liom, ConservationDecreasesWithAlpha) {
  const auto model = build_heisenberg(8, 8.0, 1);
  const auto h = assemble(model);
  const auto eig = diagonalize(h);
  const std::size_t j = 3;
  double prev = 1e300;
  for (double alpha : {1.0, 0.1, 0.01}) {
    const double c = liom_conservation(build_liom(model, eig, j, alpha), h);
    EXPECT_LE(c, prev + 1e-12) << "alpha=" << alpha;
    prev = c;
  }
}

TEST(Liom, LocalityLimits) {
  const auto model = build_heisenberg(5, 2.0, 4);
  const auto eig = diagonalize(assemble(model));
  EXPECT_LE(liom_locality(model, eig, 2, 0.5, 5), 1e-10);
  const auto ising = build_ising(6, 3.0, 5);
  const auto ieig = diagonalize(assemble(ising));
  for (std::size_t j = 0; j < ising.terms.size(); ++j)
    for (int l : {1, 2}) EXPECT_LE(liom_locality(ising, ieig, j, 0.5, l), 1e-10) << "j=" << j;
}

TEST(Liom, LocalizedSmallerThanClean) {
  const double alpha = 1.0;
  const auto loc = build_heisenberg(8, 8.0, 1);
  const auto clean = build_heisenberg(8, 0.0, 1);
  const double v_loc = liom_locality(loc, diagonalize(assemble(loc)), 3, alpha, 2);
  const double v_clean = liom_locality(clean, diagonalize(assemble(clean)), 3, alpha, 2);
  RecordProperty("ratio", std::to_string(v_loc / v_clean));
  EXPECT_LT(v_loc, v_clean);
}

TEST(Liom, ReportFields) {
  const auto model = build_heisenberg(4, 2.0, 4);
  const auto h = assemble(model);
  const auto eig = diagonalize(h);
  const auto r = liom_report(model, h, eig, 0, 0.1, {0, 1, 2, 3});
  EXPECT_EQ(r.locality.size(), 4u);
  EXPECT_LE(r.locality.at(3), 1e-10);
  EXPECT_GT(r.nontriviality, 0.0);
}
