#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "error.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace mbl {

Mat pauli_matrix(Axis axis) {
  Mat m(2, 2);
  switch (axis) {
    case Axis::X:
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case Axis::Y:
      m << cplx(0.0, 0.0), cplx(0.0, -1.0), cplx(0.0, 1.0), cplx(0.0, 0.0);
      break;
    case Axis::Z:
      m << 1.0, 0.0, 0.0, -1.0;
      break;
  }
  return m;
}

Axis parse_axis(char c) {
  switch (c) {
    case 'x': case 'X': return Axis::X;
    case 'y': case 'Y': return Axis::Y;
    case 'z': case 'Z': return Axis::Z;
    default: throw Error(ErrorCode::InvalidArgument, std::string("unknown Pauli axis '") + c + "'");
  }
}

DenseOperator build_pauli(int site, Axis axis, int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "Pauli operator needs at least one site");
  require(site >= 0 && site < n, ErrorCode::OutOfRange,
          "site " + std::to_string(site) + " outside chain of " + std::to_string(n));
  return embed(pauli_matrix(axis), {site}, site_range(0, n));
}

std::vector<double> draw_fields(int n, double h, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> mu(static_cast<std::size_t>(n));
  for (auto& m : mu) m = rng.uniform(-h, h);
  return mu;
}

namespace {

ChainModel chain_with_fields(const std::string& kind, int n, double h, std::uint64_t seed) {
  require(n >= 2, ErrorCode::InvalidArgument, "chain needs at least two sites");
  require(h >= 0.0 && std::isfinite(h), ErrorCode::InvalidArgument,
          "disorder strength must be finite and nonnegative");
  ChainModel model;
  model.kind = kind;
  model.n_sites = n;
  model.local_dim = 2;
  model.disorder_strength = h;
  model.seed = seed;
  model.fields_z = draw_fields(n, h, seed);
  return model;
}

void add_field_terms(ChainModel& model) {
  const Mat z = pauli_matrix(Axis::Z);
  for (int i = 0; i < model.n_sites; ++i)
    model.terms.push_back({{i}, model.fields_z[static_cast<std::size_t>(i)] * z});
}

}  // namespace

ChainModel build_heisenberg(int n, double h, std::uint64_t seed) {
  ChainModel model = chain_with_fields("heisenberg", n, h, seed);
  const Mat x = pauli_matrix(Axis::X), y = pauli_matrix(Axis::Y), z = pauli_matrix(Axis::Z);
  const Mat bond = kron(x, x) + kron(y, y) + kron(z, z);
  for (int i = 0; i + 1 < n; ++i) model.terms.push_back({{i, i + 1}, bond});
  add_field_terms(model);
  return model;
}

ChainModel build_ising(int n, double h, std::uint64_t seed) {
  ChainModel model = chain_with_fields("ising", n, h, seed);
  const Mat z = pauli_matrix(Axis::Z);
  const Mat bond = kron(z, z);
  for (int i = 0; i + 1 < n; ++i) model.terms.push_back({{i, i + 1}, bond});
  add_field_terms(model);
  return model;
}

ChainModel build_model(const std::string& kind, int n, double h, std::uint64_t seed) {
  if (kind == "heisenberg") return build_heisenberg(n, h, seed);
  if (kind == "ising") return build_ising(n, h, seed);
  throw Error(ErrorCode::InvalidArgument, "unknown model kind '" + kind + "'");
}

void validate(const ChainModel& model) {
  require(model.n_sites >= 1, ErrorCode::InvalidArgument, "model has no sites");
  require(model.local_dim >= 1, ErrorCode::InvalidArgument, "local dimension must be positive");
  require(model.fields_z.size() == static_cast<std::size_t>(model.n_sites),
          ErrorCode::InvalidArgument, "fields_z length differs from n_sites");
  for (double mu : model.fields_z)
    require(std::abs(mu) <= model.disorder_strength, ErrorCode::InvalidArgument,
            "field outside [-h, h]");
  for (const auto& term : model.terms) {
    require(!term.support.empty(), ErrorCode::InvalidArgument, "term with empty support");
    require(std::is_sorted(term.support.begin(), term.support.end()), ErrorCode::InvalidArgument,
            "term support must be ascending");
    require(term.support.front() >= 0 && term.support.back() < model.n_sites,
            ErrorCode::OutOfRange, "term support outside the chain");
    require(term.support.back() - term.support.front() + 1 ==
                static_cast<int>(term.support.size()),
            ErrorCode::InvalidArgument, "term support must be contiguous");
    const double expected =
        std::pow(static_cast<double>(model.local_dim), static_cast<double>(term.support.size()));
    require(static_cast<double>(term.matrix.rows()) == expected &&
                term.matrix.rows() == term.matrix.cols(),
            ErrorCode::DimensionMismatch, "term matrix dimension does not match its support");
    require(is_hermitian(term.matrix, 1e-12), ErrorCode::NotHermitian, "term matrix not Hermitian");
  }
}

std::size_t space_dim(int local_dim, std::size_t n_sites, std::size_t max_dim) {
  std::size_t dim = 1;
  for (std::size_t i = 0; i < n_sites; ++i) {
    require(dim <= max_dim / static_cast<std::size_t>(local_dim), ErrorCode::DimensionCap,
            "Hilbert-space dimension exceeds cap " + std::to_string(max_dim));
    dim *= static_cast<std::size_t>(local_dim);
  }
  return dim;
}

std::vector<Eigen::Index> digit_offsets(const SiteSet& sites, const SiteSet& space, int d) {
  const std::size_t m = space.size();
  std::vector<Eigen::Index> weight(sites.size());
  for (std::size_t k = 0; k < sites.size(); ++k) {
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(space.begin(), space.end(), sites[k]) - space.begin());
    Eigen::Index w = 1;
    for (std::size_t p = pos + 1; p < m; ++p) w *= d;
    weight[k] = w;
  }
  Eigen::Index count = 1;
  for (std::size_t k = 0; k < sites.size(); ++k) count *= d;
  std::vector<Eigen::Index> offsets(static_cast<std::size_t>(count));
  for (Eigen::Index c = 0; c < count; ++c) {
    Eigen::Index rem = c, off = 0;
    for (std::size_t k = sites.size(); k-- > 0;) {
      off += (rem % d) * weight[k];
      rem /= d;
    }
    offsets[static_cast<std::size_t>(c)] = off;
  }
  return offsets;
}

namespace {

void accumulate_embedded(Mat& out, const Mat& local, const SiteSet& local_sites,
                         const SiteSet& space, int d) {
  const SiteSet rest = set_difference(space, local_sites);
  const auto off_local = digit_offsets(local_sites, space, d);
  const auto off_rest = digit_offsets(rest, space, d);
  const Eigen::Index k = local.rows();
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) {
      const cplx v = local(i, j);
      if (v == cplx(0.0, 0.0)) continue;
      const Eigen::Index oi = off_local[static_cast<std::size_t>(i)];
      const Eigen::Index oj = off_local[static_cast<std::size_t>(j)];
      for (Eigen::Index r : off_rest) out(oi + r, oj + r) += v;
    }
  }
}

}  // namespace

DenseOperator embed(const Mat& local, const SiteSet& local_sites, const SiteSet& space,
                    int local_dim) {
  require(is_subset(local_sites, space), ErrorCode::InvalidArgument,
          "operator sites are not contained in the target space");
  const std::size_t local_size = space_dim(local_dim, local_sites.size(), SIZE_MAX);
  require(static_cast<std::size_t>(local.rows()) == local_size && local.rows() == local.cols(),
          ErrorCode::DimensionMismatch, "local matrix dimension does not match its sites");
  const auto dim = static_cast<Eigen::Index>(space_dim(local_dim, space.size(), SIZE_MAX));
  DenseOperator op;
  op.entries = Mat::Zero(dim, dim);
  op.space = space;
  op.support = local_sites;
  accumulate_embedded(op.entries, local, local_sites, space, local_dim);
  return op;
}

DenseOperator embed(const DenseOperator& op, const SiteSet& space, int local_dim) {
  DenseOperator out = embed(op.entries, op.space, space, local_dim);
  out.support = op.support;
  return out;
}

DenseOperator reduce_operator(const DenseOperator& op, const SiteSet& space, int local_dim) {
  require(is_subset(space, op.space), ErrorCode::InvalidArgument,
          "target space is not contained in the operator's space");
  require(is_subset(op.support, space), ErrorCode::InvalidArgument,
          "operator support is not contained in the target space");
  const SiteSet rest = set_difference(op.space, space);
  const auto off_keep = digit_offsets(space, op.space, local_dim);
  const auto off_rest = digit_offsets(rest, op.space, local_dim);
  const auto k = static_cast<Eigen::Index>(off_keep.size());
  DenseOperator out;
  out.entries = Mat::Zero(k, k);
  out.space = space;
  out.support = op.support;
  const double scale = 1.0 / static_cast<double>(off_rest.size());
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) {
      cplx sum(0.0, 0.0);
      const Eigen::Index oi = off_keep[static_cast<std::size_t>(i)];
      const Eigen::Index oj = off_keep[static_cast<std::size_t>(j)];
      for (Eigen::Index r : off_rest) sum += op.entries(oi + r, oj + r);
      out.entries(i, j) = sum * scale;
    }
  }
  return out;
}

DenseOperator assemble_terms(const ChainModel& model, const std::vector<std::size_t>& term_ids,
                             const SiteSet& space, std::size_t max_dim) {
  const auto dim =
      static_cast<Eigen::Index>(space_dim(model.local_dim, space.size(), max_dim));
  DenseOperator op;
  op.entries = Mat::Zero(dim, dim);
  op.space = space;
  SiteSet support;
  for (std::size_t id : term_ids) {
    require(id < model.terms.size(), ErrorCode::OutOfRange, "term index out of range");
    const LocalTerm& term = model.terms[id];
    require(is_subset(term.support, space), ErrorCode::InvalidArgument,
            "term support outside the target space");
    accumulate_embedded(op.entries, term.matrix, term.support, space, model.local_dim);
    support = set_union(support, term.support);
  }
  op.support = support;
  return op;
}

DenseOperator assemble(const ChainModel& model, std::size_t max_dim) {
  validate(model);
  std::vector<std::size_t> all(model.terms.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return assemble_terms(model, all, site_range(0, model.n_sites), max_dim);
}

std::vector<int> site_distances(const SiteSet& from, const ChainModel& model) {
  const auto n = static_cast<std::size_t>(model.n_sites);
  std::vector<std::vector<int>> adjacency(n);
  for (const auto& term : model.terms)
    for (int a : term.support)
      for (int b : term.support)
        if (a != b) adjacency[static_cast<std::size_t>(a)].push_back(b);

  std::vector<int> dist(n, kUnreachable);
  std::deque<int> queue;
  for (int s : from) {
    require(s >= 0 && s < model.n_sites, ErrorCode::OutOfRange, "site outside the chain");
    dist[static_cast<std::size_t>(s)] = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    for (int t : adjacency[static_cast<std::size_t>(s)]) {
      if (dist[static_cast<std::size_t>(t)] != kUnreachable) continue;
      dist[static_cast<std::size_t>(t)] = dist[static_cast<std::size_t>(s)] + 1;
      queue.push_back(t);
    }
  }
  return dist;
}

int interaction_distance(const SiteSet& a, const SiteSet& b, const ChainModel& model) {
  require(!a.empty() && !b.empty(), ErrorCode::InvalidArgument, "empty support");
  const auto dist = site_distances(a, model);
  int best = kUnreachable;
  for (int s : b) {
    require(s >= 0 && s < model.n_sites, ErrorCode::OutOfRange, "site outside the chain");
    best = std::min(best, dist[static_cast<std::size_t>(s)]);
  }
  return best;
}

SiteSet neighbourhood(const SiteSet& center, int l, const ChainModel& model) {
  require(l >= 0, ErrorCode::InvalidArgument, "truncation radius must be nonnegative");
  require(!center.empty(), ErrorCode::InvalidArgument, "empty support");
  const auto dist = site_distances(center, model);
  SiteSet out;
  for (int s = 0; s < model.n_sites; ++s)
    if (dist[static_cast<std::size_t>(s)] <= l) out.push_back(s);
  return out;
}

std::vector<std::size_t> terms_within(const ChainModel& model, const SiteSet& region) {
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < model.terms.size(); ++i)
    if (is_subset(model.terms[i].support, region)) ids.push_back(i);
  return ids;
}

DenseOperator restrict_hamiltonian(const ChainModel& model, const SiteSet& center, int l,
                                   std::size_t max_dim) {
  const SiteSet region = neighbourhood(center, l, model);
  return assemble_terms(model, terms_within(model, region), site_range(0, model.n_sites),
                        max_dim);
}

DenseOperator restrict_hamiltonian_local(const ChainModel& model, const SiteSet& center, int l) {
  const SiteSet region = neighbourhood(center, l, model);
  return assemble_terms(model, terms_within(model, region), region);
}

RegionSplit split_regions(const ChainModel& model, const SiteSet& supp_a, const SiteSet& supp_b) {
  const int d = interaction_distance(supp_a, supp_b, model);
  require(d >= 2 && d != kUnreachable, ErrorCode::InvalidArgument,
          "regions too close to separate (distance " + std::to_string(d) + ")");
  const bool a_left = supp_a.front() < supp_b.front();
  const int r_left = d / 2;
  const int r_right = (d - 1) / 2;
  RegionSplit split;
  split.distance = d;
  split.region_a = neighbourhood(supp_a, a_left ? r_left : r_right, model);
  split.region_b = neighbourhood(supp_b, a_left ? r_right : r_left, model);
  split.h_a = assemble_terms(model, terms_within(model, split.region_a), split.region_a);
  split.h_b = assemble_terms(model, terms_within(model, split.region_b), split.region_b);
  return split;
}

DenseOperator normalize_observable(const DenseOperator& op) {
  const double norm = spectral_norm(op.entries);
  require(norm > 0.0, ErrorCode::InvalidArgument, "cannot normalize the zero operator");
  DenseOperator out = op;
  out.entries /= norm;
  return out;
}

}  // namespace mbl
