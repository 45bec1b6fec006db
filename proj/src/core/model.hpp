#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "types.hpp"

namespace mbl {

inline constexpr std::size_t kDefaultMaxDim = std::size_t{1} << 14;

enum class Axis { X, Y, Z };

// One interaction h_j: a Hermitian matrix on a contiguous block of sites.
struct LocalTerm {
  SiteSet support;
  Mat matrix;
};

// Open spin chain H = sum_j h_j with a seeded random z-field.
struct ChainModel {
  std::string kind = "custom";  // cache key component: "heisenberg", "ising", ...
  int n_sites = 0;
  int local_dim = 2;
  std::vector<LocalTerm> terms;
  std::vector<double> fields_z;
  double disorder_strength = 0.0;
  std::uint64_t seed = 0;
};

// Square matrix on the tensor product of the sites in `space` (ascending; the
// first site is the most significant tensor factor). `support` lists the sites
// on which the operator acts nontrivially.
struct DenseOperator {
  Mat entries;
  SiteSet support;
  SiteSet space;

  Eigen::Index dim() const { return entries.rows(); }
};

Mat pauli_matrix(Axis axis);
Axis parse_axis(char c);

DenseOperator build_pauli(int site, Axis axis, int n);

// mu_i drawn uniformly from [-h, h] by SplitMix64(seed), in site order.
std::vector<double> draw_fields(int n, double h, std::uint64_t seed);

// sum_i (X_i X_{i+1} + Y_i Y_{i+1} + Z_i Z_{i+1}) + sum_i mu_i Z_i
ChainModel build_heisenberg(int n, double h, std::uint64_t seed);

// Classical chain sum_i Z_i Z_{i+1} + sum_i mu_i Z_i; diagonal in the product basis.
ChainModel build_ising(int n, double h, std::uint64_t seed);

ChainModel build_model(const std::string& kind, int n, double h, std::uint64_t seed);

// Throws on any violated ChainModel / LocalTerm invariant.
void validate(const ChainModel& model);

std::size_t space_dim(int local_dim, std::size_t n_sites, std::size_t max_dim);

// Embeds `local` (acting on `local_sites`) into the product space of `space`.
DenseOperator embed(const Mat& local, const SiteSet& local_sites, const SiteSet& space,
                    int local_dim = 2);
DenseOperator embed(const DenseOperator& op, const SiteSet& space, int local_dim = 2);

// Inverse of embed for an operator acting trivially outside `space`: the
// normalized partial trace over the remaining sites.
DenseOperator reduce_operator(const DenseOperator& op, const SiteSet& space, int local_dim = 2);

// offsets[c] = index contribution, within the product space of `space`, of
// configuration c of the sub-list `sites` (first site most significant).
std::vector<Eigen::Index> digit_offsets(const SiteSet& sites, const SiteSet& space, int d);

DenseOperator assemble(const ChainModel& model, std::size_t max_dim = kDefaultMaxDim);

// Sum of the listed terms on `space`.
DenseOperator assemble_terms(const ChainModel& model, const std::vector<std::size_t>& term_ids,
                             const SiteSet& space, std::size_t max_dim = kDefaultMaxDim);

// Graph distance from `from` to every site on the interaction graph (sites
// sharing a term are adjacent). Unreachable sites get kUnreachable.
inline constexpr int kUnreachable = 1 << 30;
std::vector<int> site_distances(const SiteSet& from, const ChainModel& model);

int interaction_distance(const SiteSet& a, const SiteSet& b, const ChainModel& model);

// Sites within graph distance l of `center` (always contains `center`).
SiteSet neighbourhood(const SiteSet& center, int l, const ChainModel& model);

// Indices of terms whose support lies entirely inside `region`.
std::vector<std::size_t> terms_within(const ChainModel& model, const SiteSet& region);

// H_A^l: every term contained in the distance-l neighbourhood of the support,
// acting on the full chain (identity elsewhere).
DenseOperator restrict_hamiltonian(const ChainModel& model, const SiteSet& center, int l,
                                   std::size_t max_dim = kDefaultMaxDim);

// Same terms, represented on the neighbourhood's own smaller space.
DenseOperator restrict_hamiltonian_local(const ChainModel& model, const SiteSet& center, int l);

struct RegionSplit {
  DenseOperator h_a;  // on region A's space
  DenseOperator h_b;  // on region B's space
  SiteSet region_a;
  SiteSet region_b;
  int distance = 0;
};

// Disjoint restricted Hamiltonians around A and B. The region that starts
// further left gets radius floor(d/2), the other floor((d-1)/2); the two
// radii sum to d-1 so no term is shared.
RegionSplit split_regions(const ChainModel& model, const SiteSet& supp_a, const SiteSet& supp_b);

DenseOperator normalize_observable(const DenseOperator& op);

}  // namespace mbl
