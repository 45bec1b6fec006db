#include "dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "error.hpp"
#include "linalg.hpp"

namespace mbl {

namespace {

void require_full_space(const DenseOperator& op, const EigenSystem& eig) {
  require(op.dim() == eig.dim(), ErrorCode::DimensionMismatch,
          "operator and eigensystem dimensions differ");
}

struct RegionEvolution {
  SiteSet region;
  bool is_full = false;
  EigenSystem eig;
  Mat a_eig;
};

}  // namespace

std::string to_string(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::Truncation: return "truncation";
    case ProbeKind::Commutator: return "commutator";
    case ProbeKind::Excitation: return "excitation";
    case ProbeKind::Subspace: return "subspace";
  }
  return "unknown";
}

std::map<int, double> ProbeSeries::sup_over_t(bool min_t_factor) const {
  std::map<int, double> sup;
  for (const auto& s : samples) {
    double v = s.value;
    if (min_t_factor) {
      if (s.t <= 0.0) continue;
      v /= std::min(s.t, 1.0);
    }
    auto it = sup.find(s.distance);
    if (it == sup.end()) {
      sup.emplace(s.distance, v);
    } else {
      it->second = std::max(it->second, v);
    }
  }
  return sup;
}

std::vector<double> geometric_time_grid(double t_max, double t0) {
  require(t_max >= 0.0 && t0 > 0.0, ErrorCode::InvalidArgument, "invalid time grid");
  std::vector<double> grid{0.0};
  for (double t = t0; t <= t_max; t *= 2.0) grid.push_back(t);
  if (t_max > 0.0 && grid.back() != t_max) grid.push_back(t_max);
  return grid;
}

Mat evolve_eigenbasis(const Mat& a_eig, const RealVec& energies, double t) {
  require(a_eig.rows() == energies.size() && a_eig.cols() == energies.size(),
          ErrorCode::DimensionMismatch, "operator and spectrum dimensions differ");
  const Eigen::Index dim = energies.size();
  Mat out(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      const cplx v = a_eig(r, s);
      out(r, s) = v == cplx(0.0, 0.0) ? v : v * std::polar(1.0, t * (energies(r) - energies(s)));
    }
  }
  return out;
}

DenseOperator evolve_observable(const DenseOperator& a, const EigenSystem& eig, double t) {
  require_full_space(a, eig);
  DenseOperator out = a;
  out.entries = eig.from_eigenbasis(evolve_eigenbasis(eig.to_eigenbasis(a.entries), eig.energies, t));
  return out;
}

ProbeSeries truncation_series(const ChainModel& model, const DenseOperator& a,
                              const EigenSystem& eig, const std::vector<int>& ls,
                              const std::vector<double>& ts) {
  require_full_space(a, eig);
  const SiteSet chain = site_range(0, model.n_sites);
  require(a.space == chain, ErrorCode::InvalidArgument, "observable must live on the full chain");
  require(!a.support.empty(), ErrorCode::InvalidArgument, "observable has empty support");

  std::vector<RegionEvolution> regions;
  regions.reserve(ls.size());
  for (int l : ls) {
    RegionEvolution r;
    r.region = neighbourhood(a.support, l, model);
    r.is_full = r.region == chain;
    if (!r.is_full) {
      r.eig = diagonalize(restrict_hamiltonian_local(model, a.support, l));
      r.a_eig = r.eig.to_eigenbasis(reduce_operator(a, r.region, model.local_dim).entries);
    }
    regions.push_back(std::move(r));
  }

  const Mat a_eig = eig.to_eigenbasis(a.entries);
  ProbeSeries series;
  series.kind = ProbeKind::Truncation;
  for (double t : ts) {
    const Mat a_t = eig.from_eigenbasis(evolve_eigenbasis(a_eig, eig.energies, t));
    for (std::size_t i = 0; i < ls.size(); ++i) {
      const auto& r = regions[i];
      double value = 0.0;
      if (!r.is_full) {
        const Mat local_t = r.eig.from_eigenbasis(evolve_eigenbasis(r.a_eig, r.eig.energies, t));
        value = spectral_norm(a_t - embed(local_t, r.region, chain, model.local_dim).entries);
      }
      series.samples.push_back({ls[i], t, value});
    }
  }
  std::stable_sort(series.samples.begin(), series.samples.end(),
                   [](const ProbeSample& x, const ProbeSample& y) { return x.distance < y.distance; });
  return series;
}

double truncation_probe(const ChainModel& model, const DenseOperator& a, int l, double t) {
  const EigenSystem eig = diagonalize(assemble(model));
  return truncation_series(model, a, eig, {l}, {t}).samples.front().value;
}

double commutator_probe(const DenseOperator& a, const DenseOperator& b, const EigenSystem& eig,
                        double t) {
  require_full_space(a, eig);
  require_full_space(b, eig);
  const DenseOperator a_t = evolve_observable(a, eig, t);
  return spectral_norm(commutator(a_t.entries, b.entries));
}

double excitation_probe(const Vec& psi, const DenseOperator& g, const DenseOperator& a,
                        const EigenSystem& eig, double s, double t) {
  require_full_space(a, eig);
  require_full_space(g, eig);
  require(psi.size() == eig.dim(), ErrorCode::DimensionMismatch, "state dimension mismatch");
  require(std::abs(psi.norm() - 1.0) <= 1e-10, ErrorCode::InvalidArgument,
          "state must be normalized");
  require(is_hermitian(g.entries), ErrorCode::NotHermitian, "generator must be Hermitian");
  const HermitianEigen gen = hermitian_eigensystem(g.entries);
  const double g_norm = gen.values.cwiseAbs().maxCoeff();
  require(std::abs(g_norm - 1.0) <= 1e-10, ErrorCode::InvalidArgument,
          "generator must have unit norm");

  // phi = e^{-isG} psi
  Vec coeff = gen.vectors.adjoint() * psi;
  for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff(i) *= std::polar(1.0, -s * gen.values(i));
  const Vec phi = gen.vectors * coeff;

  const Mat a_t = evolve_observable(a, eig, t).entries;
  const cplx before = psi.dot(a_t * psi);
  const cplx after = phi.dot(a_t * phi);
  return std::abs(before - after);
}

double subspace_probe(const DenseOperator& a, const DenseOperator& b, const EigenSystem& eig,
                      double t, double e_mob) {
  require_full_space(a, eig);
  require_full_space(b, eig);
  Eigen::Index m = 0;
  while (m < eig.dim() && eig.energies(m) <= e_mob) ++m;
  require(m > 0, ErrorCode::InvalidArgument, "no level lies below the mobility edge");
  const Mat a_t = evolve_eigenbasis(eig.to_eigenbasis(a.entries), eig.energies, t);
  const Mat b_eig = eig.to_eigenbasis(b.entries);
  const Mat c = commutator(a_t, b_eig);
  return spectral_norm(c.topLeftCorner(m, m));
}

LocalizationFit fit_localization(const ProbeSeries& series, FitAnsatz ansatz, bool min_t_factor) {
  struct Point {
    double l, t, log_value;
  };
  std::vector<Point> points;
  LocalizationFit fit;

  auto take = [&](double l, double t, double value) {
    if (value <= kFitFloor) {
      ++fit.points_floored;
      return;
    }
    points.push_back({l, t, std::log(value)});
  };

  if (ansatz == FitAnsatz::ZeroVelocity) {
    for (const auto& [d, v] : series.sup_over_t(min_t_factor)) take(d, 0.0, v);
  } else {
    for (const auto& s : series.samples) {
      double v = s.value;
      if (min_t_factor) {
        if (s.t <= 0.0) continue;
        v /= std::min(s.t, 1.0);
      }
      take(s.distance, s.t, v);
    }
  }

  std::set<double> distances;
  for (const auto& p : points) distances.insert(p.l);
  require(distances.size() >= 3, ErrorCode::InsufficientData,
          "localization fit needs at least three distances with values above the floor");

  const Eigen::Index cols = ansatz == FitAnsatz::ZeroVelocity ? 2 : 3;
  const auto rows = static_cast<Eigen::Index>(points.size());
  RealMat design(rows, cols);
  RealVec rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& p = points[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = p.l;
    if (cols == 3) design(i, 2) = p.t;
    rhs(i) = p.log_value;
  }
  const auto qr = design.colPivHouseholderQr();
  require(qr.rank() == cols, ErrorCode::InsufficientData, "localization fit is rank deficient");
  const RealVec coef = qr.solve(rhs);

  fit.c = std::exp(coef(0));
  fit.mu = -coef(1);
  fit.v = cols == 3 && fit.mu != 0.0 ? coef(2) / fit.mu : 0.0;
  fit.points_used = static_cast<int>(rows);
  fit.residual = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(rows));
  return fit;
}

LocalizationFit exact_localization_fit(const ProbeSeries& series, double zero_tol) {
  require(zero_tol > 0.0, ErrorCode::InvalidArgument, "zero tolerance must be positive");
  const auto sup = series.sup_over_t();
  auto it = sup.find(0);
  require(it != sup.end(), ErrorCode::InsufficientData, "series has no l = 0 samples");
  LocalizationFit fit;
  for (const auto& [d, v] : sup) {
    if (d == 0) continue;
    require(v <= zero_tol, ErrorCode::InvalidArgument,
            "series is not exactly localized beyond l = 0");
    ++fit.points_floored;
  }
  require(fit.points_floored > 0, ErrorCode::InsufficientData, "series has no l >= 1 samples");
  fit.c = it->second > zero_tol ? it->second : 2.0;
  fit.mu = std::log(fit.c / zero_tol);
  fit.points_used = 1;
  return fit;
}

}  // namespace mbl
