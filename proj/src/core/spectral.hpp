#pragma once

#include <vector>

#include "model.hpp"
#include "types.hpp"

namespace mbl {

// Ascending energies and orthonormal eigencolumns of a Hermitian operator.
struct EigenSystem {
  RealVec energies;
  Mat vectors;
  // Copy of `vectors` when every entry is real; empty otherwise. Rotations use
  // it to run real kernels.
  RealMat real_vectors;

  Eigen::Index dim() const { return energies.size(); }
  // Spectral norm of the diagonalized operator.
  double norm() const;
  // Default degeneracy tolerance: 1e-10 * ||H|| (absolute 1e-10 for H = 0).
  double default_tolerance() const;

  Mat to_eigenbasis(const Mat& a) const;    // V^dag A V
  Mat from_eigenbasis(const Mat& a) const;  // V A V^dag
  Mat reconstruct() const;                  // V diag(E) V^dag
  Vec state(Eigen::Index k) const { return vectors.col(k); }
};

EigenSystem diagonalize(const Mat& h);
EigenSystem diagonalize(const DenseOperator& h);
EigenSystem make_eigensystem(RealVec energies, Mat vectors);

// Energies only; cheaper when eigenvectors are not needed.
RealVec eigenvalues(const DenseOperator& h);

struct AssumptionAI {
  double gamma = 0.0;
  bool holds = false;
};

struct AssumptionAII {
  double gamma_tilde = 0.0;
  double eta = 0.0;
  bool holds = false;
};

struct AssumptionAIII {
  double zeta = 0.0;
  bool holds = false;
};

AssumptionAI check_assumption_ai(const RealVec& energies, double tol);
AssumptionAI check_assumption_ai(const EigenSystem& eig, double tol);

// Exact minimum over all gap pairs, computed by sorting both gap lists.
AssumptionAII check_assumption_aii(const RealVec& energies_a, const RealVec& energies_b,
                                   double tol);
AssumptionAII check_assumption_aii(const EigenSystem& eig_a, const EigenSystem& eig_b,
                                   double tol);

// zeta_k = min_{r != s} | |E_r - E_k| - |E_s - E_k| |, r and s ranging over
// all levels (k included).
AssumptionAIII check_assumption_aiii(const RealVec& energies, Eigen::Index k, double tol);
AssumptionAIII check_assumption_aiii(const EigenSystem& eig, Eigen::Index k, double tol);

struct GapReport {
  double gamma = 0.0;
  double gamma_tilde = 0.0;
  double eta = 0.0;
  std::vector<double> zeta;  // indexed by level
  bool degenerate_ai = false;
  bool degenerate_aii = false;
  bool degenerate_aiii = false;
};

GapReport gap_report(const RealVec& energies, const RealVec& energies_a,
                     const RealVec& energies_b, double tol);

// Number of levels with E_k <= e.
std::size_t idos(const RealVec& energies, double e);
std::size_t idos(const EigenSystem& eig, double e);

struct DosHistogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> centers;
  std::vector<double> mean;
  std::vector<double> variance;  // population variance across realizations
  std::vector<std::vector<double>> counts;  // [realization][bin]
};

DosHistogram dos_histogram(const std::vector<RealVec>& ensemble, int bins);

struct GaussianFit {
  double amplitude = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  double rel_l2_error = 0.0;
};

// Least-squares fit of A exp(-(x - m)^2 / (2 s^2)).
GaussianFit gaussian_fit(const std::vector<double>& centers, const std::vector<double>& counts);

}  // namespace mbl
