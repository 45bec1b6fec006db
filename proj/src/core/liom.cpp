#include "liom.hpp"

#include "error.hpp"
#include "filters.hpp"
#include "linalg.hpp"

namespace mbl {

namespace {

DenseOperator filter_term(const DenseOperator& op, const EigenSystem& eig, double alpha) {
  require(alpha >= 0.0, ErrorCode::InvalidArgument, "alpha must be nonnegative");
  return alpha == 0.0 ? constant_filter(op, eig) : gaussian_filter(op, eig, alpha);
}

double locality_against(const DenseOperator& full, const ChainModel& model, std::size_t j,
                        double alpha, int l) {
  require(l >= 0, ErrorCode::InvalidArgument, "locality radius must be nonnegative");
  const auto& term = model.terms[j];
  const SiteSet chain = site_range(0, model.n_sites);
  const SiteSet region = neighbourhood(term.support, l, model);
  if (region == chain) {
    // Same Hamiltonian, same eigensystem: the two filters coincide.
    return 0.0;
  }
  const EigenSystem local_eig = diagonalize(restrict_hamiltonian_local(model, term.support, l));
  const DenseOperator local_term = embed(term.matrix, term.support, region, model.local_dim);
  const DenseOperator local = filter_term(local_term, local_eig, alpha);
  return spectral_norm(full.entries - embed(local, chain, model.local_dim).entries);
}

}  // namespace

DenseOperator term_operator(const ChainModel& model, std::size_t j) {
  require(j < model.terms.size(), ErrorCode::OutOfRange, "term index out of range");
  const auto& term = model.terms[j];
  return embed(term.matrix, term.support, site_range(0, model.n_sites), model.local_dim);
}

DenseOperator build_liom(const ChainModel& model, const EigenSystem& eig, std::size_t j,
                         double alpha) {
  return filter_term(term_operator(model, j), eig, alpha);
}

double liom_conservation(const DenseOperator& m, const DenseOperator& h) {
  require(m.dim() == h.dim(), ErrorCode::DimensionMismatch, "operator dimensions differ");
  return spectral_norm(commutator(m.entries, h.entries));
}

double liom_locality(const ChainModel& model, const EigenSystem& eig, std::size_t j, double alpha,
                     int l) {
  return locality_against(build_liom(model, eig, j, alpha), model, j, alpha, l);
}

LiomReport liom_report(const ChainModel& model, const DenseOperator& h, const EigenSystem& eig,
                       std::size_t j, double alpha, const std::vector<int>& ls) {
  LiomReport r;
  r.term = j;
  r.alpha = alpha;
  const DenseOperator m = build_liom(model, eig, j, alpha);
  r.conservation = liom_conservation(m, h);
  const cplx mean = m.entries.trace() / static_cast<double>(m.dim());
  Mat shifted = m.entries;
  shifted.diagonal().array() -= mean;
  r.nontriviality = spectral_norm(shifted);
  for (int l : ls) r.locality[l] = locality_against(m, model, j, alpha, l);
  return r;
}

}  // namespace mbl
