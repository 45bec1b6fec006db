#include "correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "error.hpp"

namespace mbl {

namespace {

void require_level(Eigen::Index k, const EigenSystem& eig) {
  require(k >= 0 && k < eig.dim(), ErrorCode::OutOfRange, "level index out of range");
}

void require_dims(const DenseOperator& op, const EigenSystem& eig) {
  require(op.dim() == eig.dim(), ErrorCode::DimensionMismatch,
          "operator and eigensystem dimensions differ");
}

}  // namespace

double connected_correlator(Eigen::Index k, const DenseOperator& a, const DenseOperator& b,
                            const EigenSystem& eig) {
  require_level(k, eig);
  require_dims(a, eig);
  require_dims(b, eig);
  const Vec v = eig.state(k);
  const Vec bv = b.entries * v;
  const cplx ab = v.dot(a.entries * bv);
  const cplx av = v.dot(a.entries * v);
  const cplx bk = v.dot(bv);
  return std::abs(ab - av * bk);
}

std::vector<double> connected_correlators(const Mat& a_eig, const Mat& b_eig) {
  require(a_eig.rows() == b_eig.rows() && a_eig.cols() == b_eig.cols() &&
              a_eig.rows() == a_eig.cols(),
          ErrorCode::DimensionMismatch, "operator dimensions differ");
  const Eigen::Index dim = a_eig.rows();
  std::vector<double> out(static_cast<std::size_t>(dim));
  for (Eigen::Index k = 0; k < dim; ++k) {
    const cplx ab = (a_eig.row(k) * b_eig.col(k))(0, 0);
    out[static_cast<std::size_t>(k)] = std::abs(ab - a_eig(k, k) * b_eig(k, k));
  }
  return out;
}

double level_contribution(Eigen::Index k, Eigen::Index l, const DenseOperator& a,
                          const DenseOperator& b, const EigenSystem& eig) {
  require_level(k, eig);
  require_level(l, eig);
  require(l != k, ErrorCode::InvalidArgument, "level contribution needs l != k");
  require_dims(a, eig);
  require_dims(b, eig);
  const Vec vk = eig.state(k);
  const Vec vl = eig.state(l);
  // Shifting B by a multiple of the identity leaves <l|B|k> unchanged for l != k.
  const cplx a_kl = vk.dot(a.entries * vl);
  const cplx b_lk = vl.dot(b.entries * vk);
  return std::abs(a_kl * b_lk);
}

std::vector<ClusterReport> verify_theorem_a(const EigenSystem& eig,
                                            const std::vector<ObservablePair>& pairs,
                                            const LocalizationFit& fit) {
  require(fit.c > 0.0 && std::isfinite(fit.mu), ErrorCode::InvalidArgument,
          "Theorem-a check needs a localization fit");
  std::vector<ClusterReport> reports;
  reports.reserve(pairs.size() * static_cast<std::size_t>(eig.dim()));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    require_dims(pairs[p].a, eig);
    require_dims(pairs[p].b, eig);
    const auto corr = connected_correlators(eig.to_eigenbasis(pairs[p].a.entries),
                                            eig.to_eigenbasis(pairs[p].b.entries));
    const double bound = 4.0 * fit.c * std::exp(-fit.mu * pairs[p].distance / 2.0);
    for (Eigen::Index k = 0; k < eig.dim(); ++k) {
      ClusterReport r;
      r.k = k;
      r.energy = eig.energies(k);
      r.pair = p;
      r.distance = pairs[p].distance;
      r.correlator = corr[static_cast<std::size_t>(k)];
      r.bound = bound;
      r.margin = bound - r.correlator;
      reports.push_back(r);
    }
  }
  std::stable_sort(reports.begin(), reports.end(), [](const ClusterReport& x, const ClusterReport& y) {
    return x.k != y.k ? x.k < y.k : x.pair < y.pair;
  });
  return reports;
}

double theorem_b_bound(double theta, double c_mob, double mu, double d, double kappa) {
  require(kappa > 0.0, ErrorCode::InvalidArgument, "kappa must be positive");
  require(d > 0.0 && mu > 0.0, ErrorCode::InvalidArgument,
          "Theorem-b bound needs positive distance and decay rate");
  const double pi = std::numbers::pi;
  const double log_term = std::log(pi * mu * d / (kappa * kappa)) + 4.0 + 2.0 * pi;
  return (12.0 * pi * theta * c_mob + log_term) * std::exp(-mu * d) / (2.0 * pi);
}

ClusterReport verify_theorem_b(const EigenSystem& eig, Eigen::Index k, const DenseOperator& a,
                               const DenseOperator& b, int d, double kappa, double c_mob,
                               double mu) {
  require(kappa > 0.0, ErrorCode::InvalidArgument, "kappa must be positive");
  ClusterReport r;
  r.k = k;
  r.correlator = connected_correlator(k, a, b, eig);
  r.energy = eig.energies(k);
  r.distance = d;
  r.kappa = kappa;
  const auto theta = static_cast<double>(idos(eig, r.energy + kappa));
  r.bound = theorem_b_bound(theta, c_mob, mu, d, kappa);
  r.margin = r.bound - r.correlator;
  return r;
}

std::vector<double> kappa_grid(const EigenSystem& eig, int points) {
  require(points >= 2, ErrorCode::InvalidArgument, "kappa grid needs at least two points");
  require(eig.dim() >= 2, ErrorCode::InvalidArgument, "kappa grid needs two levels");
  const double width = eig.energies(eig.dim() - 1) - eig.energies(0);
  require(width > 0.0, ErrorCode::InvalidArgument, "spectrum has zero width");
  double lo = 0.5 * check_assumption_ai(eig, 0.0).gamma;
  // Degenerate spectra have gamma = 0; fall back to a small fraction of the width.
  if (!(lo > 0.0)) lo = 1e-6 * width;
  const double ratio = std::log(width / lo);
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    grid[static_cast<std::size_t>(i)] = lo * std::exp(ratio * i / (points - 1));
  grid.back() = width;
  return grid;
}

ClusterReport optimize_theorem_b(const EigenSystem& eig, Eigen::Index k, const DenseOperator& a,
                                 const DenseOperator& b, int d, double c_mob, double mu,
                                 const std::vector<double>& kappas) {
  require(!kappas.empty(), ErrorCode::InvalidArgument, "empty kappa grid");
  require_level(k, eig);
  const double corr = connected_correlator(k, a, b, eig);
  ClusterReport best;
  bool first = true;
  for (double kappa : kappas) {
    require(kappa > 0.0, ErrorCode::InvalidArgument, "kappa must be positive");
    const auto theta = static_cast<double>(idos(eig, eig.energies(k) + kappa));
    const double bound = theorem_b_bound(theta, c_mob, mu, d, kappa);
    if (first || bound < best.bound) {
      best.k = k;
      best.energy = eig.energies(k);
      best.distance = d;
      best.correlator = corr;
      best.bound = bound;
      best.margin = bound - corr;
      best.kappa = kappa;
      first = false;
    }
  }
  return best;
}

}  // namespace mbl
