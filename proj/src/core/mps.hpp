#pragma once

#include <string>
#include <vector>

#include "types.hpp"

namespace mbl {

// Order-3 tensor stored as data[(a * phys + i) * right + b] for left bond a,
// physical index i and right bond b.
struct SiteTensor {
  int left = 1;
  int phys = 2;
  int right = 1;
  std::vector<cplx> data;

  cplx& at(int a, int i, int b) { return data[static_cast<std::size_t>((a * phys + i) * right + b)]; }
  const cplx& at(int a, int i, int b) const {
    return data[static_cast<std::size_t>((a * phys + i) * right + b)];
  }
};

struct MpsState {
  int n_sites = 0;
  int local_dim = 2;
  std::vector<SiteTensor> tensors;
  std::vector<int> bond_dims;     // n + 1 entries, both ends 1
  std::vector<double> discarded;  // n - 1 interior cuts
  bool normalized = false;

  double total_discarded() const;
};

struct TruncationPolicy {
  int max_bond = 0;               // 0: unlimited
  double weight_threshold = 0.0;  // per cut: drop the smallest values while their squared sum stays <= this
};

// Left-to-right SVD sweep. Singular values below 1e-14 s_max are always
// dropped; the discarded weight per cut is the sum of dropped squared singular
// values. The result is renormalized.
MpsState dense_to_mps(const Vec& state, int n, const TruncationPolicy& policy, int local_dim = 2);

Vec mps_to_dense(const MpsState& mps);

// |<state|mps>|
double mps_fidelity(const MpsState& mps, const Vec& state);

// Von Neumann entropy (bits) of the first `cut` sites.
double entanglement_entropy(const Vec& state, int cut, int local_dim = 2);

struct EntropyProfile {
  std::vector<double> entropies;  // cuts 1 .. n-1
  double cut_average = 0.0;
};
EntropyProfile entropy_profile(const Vec& state, int local_dim = 2);

// log2 of the smallest rank r whose tail mass sum_{k > r} lambda_k is <= delta.
double smooth_max_entropy(const std::vector<double>& rho_eigenvalues, double delta);

struct BondDimensionEstimate {
  double xi_corr = 0.0;             // 2 / (mu log2 e)
  double exponent = 0.0;            // 8 xi_corr
  double main_text_exponent = 0.0;  // 16 / (mu log2 e)
  double identity_error = 0.0;      // |exponent - main_text_exponent|
  double log2_d = 0.0;
  double d = 0.0;                   // may be inf when log2_d is large
};

// D = C^{c' xi^{c xi + 1}} (3N / epsilon)^{8 xi}
BondDimensionEstimate corollary_bond_dimension(double n, double epsilon, double mu, double big_c,
                                               double c, double c_prime);

// Binary tensors (per site: u64 left, phys, right, then entries as LE float64
// (re, im)) plus `path`.txt listing bond dimensions and discarded weights.
void export_mps(const MpsState& mps, const std::string& path);

}  // namespace mbl
