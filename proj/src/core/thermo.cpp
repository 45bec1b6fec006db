#include "thermo.hpp"

#include <cmath>

#include "error.hpp"
#include "linalg.hpp"

namespace mbl {

Mat gibbs_state(const EigenSystem& eig, double beta) {
  require(beta > 0.0 && std::isfinite(beta), ErrorCode::InvalidArgument, "beta must be positive");
  require(eig.dim() > 0, ErrorCode::InvalidArgument, "empty eigensystem");
  const double e0 = eig.energies(0);
  RealVec w(eig.dim());
  for (Eigen::Index k = 0; k < eig.dim(); ++k) w(k) = std::exp(-beta * (eig.energies(k) - e0));
  w /= w.sum();
  const Mat rho = eig.from_eigenbasis(w.cast<cplx>().asDiagonal().toDenseMatrix());
  return 0.5 * (rho + rho.adjoint());
}

Mat partial_trace(const Mat& rho, const SiteSet& space, const SiteSet& keep, int local_dim) {
  require(!keep.empty(), ErrorCode::InvalidArgument, "partial trace needs a nonempty site set");
  require(is_subset(keep, space), ErrorCode::InvalidArgument, "kept sites are not in the space");
  require(static_cast<std::size_t>(rho.rows()) == space_dim(local_dim, space.size(), SIZE_MAX) &&
              rho.rows() == rho.cols(),
          ErrorCode::DimensionMismatch, "density matrix does not match its space");
  const auto off_keep = digit_offsets(keep, space, local_dim);
  const auto off_rest = digit_offsets(set_difference(space, keep), space, local_dim);
  const auto k = static_cast<Eigen::Index>(off_keep.size());
  Mat out(k, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < k; ++i) {
      cplx sum(0.0, 0.0);
      const Eigen::Index oi = off_keep[static_cast<std::size_t>(i)];
      const Eigen::Index oj = off_keep[static_cast<std::size_t>(j)];
      for (Eigen::Index r : off_rest) sum += rho(oi + r, oj + r);
      out(i, j) = sum;
    }
  return out;
}

PerturbedState perturbed_initial(const Mat& rho, const SiteSet& space, const SiteSet& region_a,
                                 int local_dim) {
  require(!region_a.empty(), ErrorCode::InvalidArgument, "region A is empty");
  require(is_subset(region_a, space), ErrorCode::InvalidArgument, "region A is not in the space");
  const SiteSet rest = set_difference(space, region_a);
  require(!rest.empty(), ErrorCode::InvalidArgument, "region A must be a proper subset");

  PerturbedState out;
  out.rho_a = partial_trace(rho, space, region_a, local_dim);
  const Mat rho_rest = partial_trace(rho, space, rest, local_dim);
  // Ascending eigenvalues; the first column is the lowest eigenvector.
  const HermitianEigen ra = hermitian_eigensystem(0.5 * (out.rho_a + out.rho_a.adjoint()));
  out.lambda_min = ra.values(0);
  out.x = 2.0 - 2.0 * out.lambda_min;
  const Vec v = ra.vectors.col(0);
  out.xi_a = v * v.adjoint();

  const auto off_a = digit_offsets(region_a, space, local_dim);
  const auto off_r = digit_offsets(rest, space, local_dim);
  out.rho0 = Mat::Zero(rho.rows(), rho.cols());
  for (std::size_t j = 0; j < off_a.size(); ++j)
    for (std::size_t i = 0; i < off_a.size(); ++i) {
      const cplx xi = out.xi_a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      for (std::size_t s = 0; s < off_r.size(); ++s)
        for (std::size_t r = 0; r < off_r.size(); ++r)
          out.rho0(off_a[i] + off_r[r], off_a[j] + off_r[s]) =
              xi * rho_rest(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s));
    }
  return out;
}

Mat trace_distance_witness(const Mat& rho_a, const Mat& xi_a) {
  const Mat diff = rho_a - xi_a;
  const HermitianEigen e = hermitian_eigensystem(0.5 * (diff + diff.adjoint()));
  RealVec sign(e.values.size());
  for (Eigen::Index i = 0; i < sign.size(); ++i) sign(i) = e.values(i) >= 0.0 ? 1.0 : -1.0;
  return e.vectors * sign.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

ThermoProbe thermalization_probe(const ChainModel& model, const EigenSystem& eig, double beta,
                                 const SiteSet& region_a, int l, const std::vector<double>& t_grid,
                                 const std::optional<LocalizationFit>& fit) {
  const SiteSet chain = site_range(0, model.n_sites);
  require(eig.dim() == static_cast<Eigen::Index>(space_dim(model.local_dim, chain.size(), SIZE_MAX)),
          ErrorCode::DimensionMismatch, "eigensystem does not match the model");
  ThermoProbe probe;
  probe.beta = beta;
  probe.region_a = region_a;
  probe.l = l;
  probe.region_b = neighbourhood(region_a, l, model);
  require(probe.region_b != chain, ErrorCode::InvalidArgument,
          "region B covers the whole chain; choose a smaller l");

  const Mat rho = gibbs_state(eig, beta);
  const PerturbedState init = perturbed_initial(rho, chain, region_a, model.local_dim);
  probe.x = init.x;
  const Mat rho_b = partial_trace(rho, chain, probe.region_b, model.local_dim);
  const Mat rho0_eig = eig.to_eigenbasis(init.rho0);

  for (double t : t_grid) {
    // Schroedinger picture: rho(t) = e^{-iHt} rho e^{iHt}
    const Mat rho_t = eig.from_eigenbasis(evolve_eigenbasis(rho0_eig, eig.energies, -t));
    const Mat reduced = partial_trace(rho_t, chain, probe.region_b, model.local_dim);
    probe.times.push_back(t);
    probe.distances.push_back(trace_norm(reduced - rho_b));
  }
  if (fit) probe.bound = init.x - fit->c * std::exp(-fit->mu * l);
  return probe;
}

}  // namespace mbl
