#pragma once

#include <string>
#include <vector>

#include "dynamics.hpp"
#include "model.hpp"
#include "spectral.hpp"

namespace mbl {

struct ObservablePair {
  std::string name_a;
  std::string name_b;
  DenseOperator a;
  DenseOperator b;
  int distance = 0;
};

struct ClusterReport {
  Eigen::Index k = 0;
  double energy = 0.0;
  std::size_t pair = 0;  // index into the pair list
  int distance = 0;
  double correlator = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - correlator, negative on violation
  double kappa = 0.0;   // Theorem-b reports only
};

// |<k|AB|k> - <k|A|k><k|B|k>|
double connected_correlator(Eigen::Index k, const DenseOperator& a, const DenseOperator& b,
                            const EigenSystem& eig);

// Same quantity for every level at once from operators already in the
// eigenbasis.
std::vector<double> connected_correlators(const Mat& a_eig, const Mat& b_eig);

// |<k|A|l><l|B~|k>| with B~ = B - <k|B|k>; requires l != k.
double level_contribution(Eigen::Index k, Eigen::Index l, const DenseOperator& a,
                          const DenseOperator& b, const EigenSystem& eig);

// One report per (level, pair) with bound 4 c e^{-mu d / 2}; sorted by (k, pair).
std::vector<ClusterReport> verify_theorem_a(const EigenSystem& eig,
                                            const std::vector<ObservablePair>& pairs,
                                            const LocalizationFit& fit);

// (12 pi Theta c_mob + ln(pi mu d e^{4 + 2 pi} / kappa^2)) e^{-mu d} / (2 pi)
double theorem_b_bound(double theta, double c_mob, double mu, double d, double kappa);

ClusterReport verify_theorem_b(const EigenSystem& eig, Eigen::Index k, const DenseOperator& a,
                               const DenseOperator& b, int d, double kappa, double c_mob,
                               double mu);

// Theta-dependent kappa grid: `points` log-spaced values in [gamma/2, spectral width].
std::vector<double> kappa_grid(const EigenSystem& eig, int points = 40);

// Report with the smallest bound over the grid.
ClusterReport optimize_theorem_b(const EigenSystem& eig, Eigen::Index k, const DenseOperator& a,
                                 const DenseOperator& b, int d, double c_mob, double mu,
                                 const std::vector<double>& kappas);

inline bool report_passes(const ClusterReport& r) { return r.margin >= -1e-10; }

}  // namespace mbl
