#pragma once

#include <map>
#include <string>
#include <vector>

#include "model.hpp"
#include "spectral.hpp"

namespace mbl {

enum class ProbeKind { Truncation, Commutator, Excitation, Subspace };

std::string to_string(ProbeKind kind);

struct ProbeSample {
  int distance = 0;  // l for truncation, d otherwise
  double t = 0.0;
  double value = 0.0;
};

struct ProbeSeries {
  ProbeKind kind = ProbeKind::Truncation;
  std::vector<ProbeSample> samples;

  // Largest value per distance. With `min_t_factor` each sample is divided by
  // min(t, 1) first and samples at t = 0 are skipped.
  std::map<int, double> sup_over_t(bool min_t_factor = false) const;
};

// {0} followed by t0 * 2^k up to t_max, with t_max appended when it is not on
// the geometric grid.
std::vector<double> geometric_time_grid(double t_max = 100.0, double t0 = 0.25);

// a(r, s) * exp(i t (E_r - E_s)) for an operator already in the eigenbasis.
Mat evolve_eigenbasis(const Mat& a_eig, const RealVec& energies, double t);

DenseOperator evolve_observable(const DenseOperator& a, const EigenSystem& eig, double t);

// ||A(t) - exp(i t H_l) A exp(-i t H_l)|| with H_l the terms inside the
// distance-l neighbourhood of supp(A).
double truncation_probe(const ChainModel& model, const DenseOperator& a, int l, double t);

// All (l, t) pairs at once. The full evolution is computed once per t and the
// restricted one on the neighbourhood's own space.
ProbeSeries truncation_series(const ChainModel& model, const DenseOperator& a,
                              const EigenSystem& eig, const std::vector<int>& ls,
                              const std::vector<double>& ts);

// ||[A(t), B]||
double commutator_probe(const DenseOperator& a, const DenseOperator& b, const EigenSystem& eig,
                        double t);

// |<psi|A(t)|psi> - <psi|e^{isG} A(t) e^{-isG}|psi>|; requires ||G|| = 1 and
// ||psi|| = 1 to 1e-10.
double excitation_probe(const Vec& psi, const DenseOperator& g, const DenseOperator& a,
                        const EigenSystem& eig, double s, double t);

// ||P [A(t), B] P|| with P the projector onto the levels E <= e_mob.
double subspace_probe(const DenseOperator& a, const DenseOperator& b, const EigenSystem& eig,
                      double t, double e_mob);

enum class FitAnsatz { ZeroVelocity, Ballistic };

struct LocalizationFit {
  double c = 0.0;
  double mu = 0.0;
  double v = 0.0;
  double residual = 0.0;  // RMS of the log residuals
  int points_used = 0;
  int points_floored = 0;  // values <= floor, excluded from the fit
};

inline constexpr double kFitFloor = 1e-15;

// Least squares on log(value): zero velocity fits log c - mu l to the sup over
// t per distance, ballistic fits log c - mu (l - v t) to every sample.
LocalizationFit fit_localization(const ProbeSeries& series, FitAnsatz ansatz,
                                 bool min_t_factor = false);

// Envelope for series that vanish beyond l = 0 (exactly localized models):
// c is the l = 0 supremum (2 if that is also zero) and mu is chosen so that
// c e^{-mu} = zero_tol. Throws if any l >= 1 value exceeds zero_tol.
LocalizationFit exact_localization_fit(const ProbeSeries& series, double zero_tol = 1e-10);

}  // namespace mbl
