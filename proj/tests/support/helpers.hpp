#pragma once

#include <random>
#include <vector>

#include "core/model.hpp"
#include "core/spectral.hpp"
#include "oracles.hpp"

namespace testing_helpers {

inline mbl::Mat random_hermitian(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  mbl::Mat m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = mbl::cplx(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

inline mbl::Vec random_state(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  mbl::Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = mbl::cplx(g(rng), g(rng));
  return v / v.norm();
}

inline mbl::Vec product_state(const std::vector<mbl::Vec>& locals) {
  mbl::Vec v = mbl::Vec::Ones(1);
  for (const auto& l : locals) {
    mbl::Vec next(v.size() * l.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * l.size(), l.size()) = v(i) * l;
    v = next;
  }
  return v;
}

inline std::vector<double> to_std(const mbl::RealVec& v) { return {v.data(), v.data() + v.size()}; }

inline oracle::Mat oracle_hamiltonian(const mbl::ChainModel& m) {
  return oracle::chain_hamiltonian(m.kind == "heisenberg", m.fields_z);
}

}  // namespace testing_helpers
