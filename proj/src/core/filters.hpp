#pragma once

#include <string>

#include "model.hpp"
#include "spectral.hpp"

namespace mbl {

enum class FilterFamily { Gaussian, ShiftedGaussian, HighPass, Constant };

std::string to_string(FilterFamily family);
FilterFamily parse_filter_family(const std::string& name);

struct FilterSpec {
  FilterFamily family = FilterFamily::Gaussian;
  double alpha = 1.0;
  // Shifted family only: the transition E_l - E_k that is kept with weight 1
  // in the <k|.|l> element.
  double shift = 0.0;
};

// Matrix-element multipliers as functions of delta_e = E_s - E_r for the
// element <r|.|s>.
double gaussian_multiplier(double delta_e, double alpha);
double shifted_gaussian_multiplier(double delta_e, double alpha, double shift);
// 1/2 (1 + erf(delta_e / (2 sqrt(alpha))))
double highpass_multiplier(double delta_e, double alpha);

// Applies the multiplier of `spec` to an operator given in the eigenbasis.
// The constant family keeps elements whose levels belong to the same
// degenerate cluster (consecutive gaps <= tol).
Mat filter_eigenbasis(const Mat& a_eig, const RealVec& energies, const FilterSpec& spec,
                      double tol);

DenseOperator apply_filter(const DenseOperator& a, const EigenSystem& eig, const FilterSpec& spec);

DenseOperator gaussian_filter(const DenseOperator& a, const EigenSystem& eig, double alpha);
DenseOperator shifted_gaussian_filter(const DenseOperator& a, const EigenSystem& eig, double alpha,
                                      double shift);
DenseOperator highpass_filter(const DenseOperator& a, const EigenSystem& eig, double alpha);
// Sum over degenerate clusters of P_E A P_E, clusters from eig.default_tolerance().
DenseOperator constant_filter(const DenseOperator& a, const EigenSystem& eig);

struct QuadratureSpec {
  double cutoff = 8.0;  // integrate over [-T, T]
  double step = 1e-3;
  double tol = 1e-6;       // requires T >= sqrt(ln(1/tol) / alpha)
  double epsilon = 1e-4;   // high-pass: |t| < epsilon is excised from the principal value
};

// Composite-Simpson evaluation of the defining time integral of the filter.
// Meant for cross-checking the eigenbasis construction; the constant family
// has no integrable kernel and is rejected.
DenseOperator time_domain_oracle(const DenseOperator& a, const EigenSystem& eig,
                                 const FilterSpec& spec, const QuadratureSpec& quad = {});

struct DecoupledCheck {
  double error_norm = 0.0;
  double bound = 0.0;
  double xi_gap = 0.0;  // min(eta, sqrt(2) gamma_tilde)
  double eta = 0.0;
  double gamma_tilde = 0.0;
  int n_sites = 0;
};

// ||I^{H_A+H_B}(AB) - I^{H_A}(A) I^{H_B}(B)|| against 2^{4N+1} e^{-xi^2/(4 alpha)},
// N the number of sites of both regions. H_A and H_B must act on disjoint
// spaces; A and B are reduced onto those spaces.
DecoupledCheck decoupled_filter_check(const DenseOperator& a, const DenseOperator& b,
                                      const DenseOperator& h_a, const DenseOperator& h_b,
                                      double alpha);

struct HastingsKomaResult {
  double value = 0.0;  // lower branch: the half-Gaussian integral; upper: |integral - 1|
  double bound = 0.0;  // 1/2 e^{-gamma^2/(4 alpha)}
  double slack = 0.0;  // bound - value
  bool holds = false;  // slack >= -1e-12
};

// Requires E <= -gamma or E >= gamma with gamma > 0.
HastingsKomaResult hastings_koma_check(double e, double alpha, double gamma);

struct LocalityProbe {
  double value = 0.0;
  double bound = 0.0;
};

// value = |<k|[Gamma_alpha(A), B]|k>|, bound = e^{-mu d} (4 + ln(pi / (4 alpha))) / (2 pi).
LocalityProbe highpass_locality_probe(Eigen::Index k, const DenseOperator& a,
                                      const DenseOperator& b, const EigenSystem& eig, double alpha,
                                      double mu, double d);

}  // namespace mbl
