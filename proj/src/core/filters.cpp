#include "filters.hpp"

#include <cmath>
#include <numbers>

#include "dynamics.hpp"
#include "error.hpp"
#include "linalg.hpp"

namespace mbl {

namespace {

void require_alpha(double alpha) {
  require(alpha > 0.0 && std::isfinite(alpha), ErrorCode::InvalidArgument,
          "filter sharpness alpha must be positive");
}

// cluster[i] = index of the degenerate cluster of level i.
std::vector<Eigen::Index> degenerate_clusters(const RealVec& energies, double tol) {
  std::vector<Eigen::Index> cluster(static_cast<std::size_t>(energies.size()), 0);
  for (Eigen::Index i = 1; i < energies.size(); ++i) {
    const bool same = energies(i) - energies(i - 1) <= tol;
    cluster[static_cast<std::size_t>(i)] = cluster[static_cast<std::size_t>(i - 1)] + (same ? 0 : 1);
  }
  return cluster;
}

}  // namespace

std::string to_string(FilterFamily family) {
  switch (family) {
    case FilterFamily::Gaussian: return "gaussian";
    case FilterFamily::ShiftedGaussian: return "shifted_gaussian";
    case FilterFamily::HighPass: return "highpass";
    case FilterFamily::Constant: return "constant";
  }
  return "unknown";
}

FilterFamily parse_filter_family(const std::string& name) {
  if (name == "gaussian") return FilterFamily::Gaussian;
  if (name == "shifted_gaussian" || name == "shifted-gaussian") return FilterFamily::ShiftedGaussian;
  if (name == "highpass" || name == "high-pass") return FilterFamily::HighPass;
  if (name == "constant") return FilterFamily::Constant;
  throw Error(ErrorCode::InvalidArgument, "unknown filter family: " + name);
}

double gaussian_multiplier(double delta_e, double alpha) {
  const double x = delta_e * delta_e / (4.0 * alpha);
  return x < 1e-16 ? 1.0 : std::exp(-x);
}

double shifted_gaussian_multiplier(double delta_e, double alpha, double shift) {
  return gaussian_multiplier(delta_e - shift, alpha);
}

double highpass_multiplier(double delta_e, double alpha) {
  // erfc keeps full relative precision in the suppressed tail.
  return 0.5 * std::erfc(-delta_e / (2.0 * std::sqrt(alpha)));
}

Mat filter_eigenbasis(const Mat& a_eig, const RealVec& energies, const FilterSpec& spec,
                      double tol) {
  require(a_eig.rows() == energies.size() && a_eig.cols() == energies.size(),
          ErrorCode::DimensionMismatch, "operator and spectrum dimensions differ");
  if (spec.family != FilterFamily::Constant) require_alpha(spec.alpha);
  const Eigen::Index dim = energies.size();
  Mat out(dim, dim);

  if (spec.family == FilterFamily::Constant) {
    const auto cluster = degenerate_clusters(energies, tol);
    for (Eigen::Index s = 0; s < dim; ++s)
      for (Eigen::Index r = 0; r < dim; ++r)
        out(r, s) = cluster[static_cast<std::size_t>(r)] == cluster[static_cast<std::size_t>(s)]
                        ? a_eig(r, s)
                        : cplx(0.0, 0.0);
    return out;
  }

  for (Eigen::Index s = 0; s < dim; ++s) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      const double de = energies(s) - energies(r);
      double m = 1.0;
      switch (spec.family) {
        case FilterFamily::Gaussian: m = gaussian_multiplier(de, spec.alpha); break;
        case FilterFamily::ShiftedGaussian:
          m = shifted_gaussian_multiplier(de, spec.alpha, spec.shift);
          break;
        case FilterFamily::HighPass: m = highpass_multiplier(de, spec.alpha); break;
        case FilterFamily::Constant: break;
      }
      out(r, s) = m * a_eig(r, s);
    }
  }
  return out;
}

DenseOperator apply_filter(const DenseOperator& a, const EigenSystem& eig, const FilterSpec& spec) {
  require(a.dim() == eig.dim(), ErrorCode::DimensionMismatch,
          "operator and eigensystem dimensions differ");
  DenseOperator out = a;
  out.entries = eig.from_eigenbasis(
      filter_eigenbasis(eig.to_eigenbasis(a.entries), eig.energies, spec, eig.default_tolerance()));
  return out;
}

DenseOperator gaussian_filter(const DenseOperator& a, const EigenSystem& eig, double alpha) {
  require_alpha(alpha);
  return apply_filter(a, eig, {FilterFamily::Gaussian, alpha, 0.0});
}

DenseOperator shifted_gaussian_filter(const DenseOperator& a, const EigenSystem& eig, double alpha,
                                      double shift) {
  require_alpha(alpha);
  return apply_filter(a, eig, {FilterFamily::ShiftedGaussian, alpha, shift});
}

DenseOperator highpass_filter(const DenseOperator& a, const EigenSystem& eig, double alpha) {
  require_alpha(alpha);
  return apply_filter(a, eig, {FilterFamily::HighPass, alpha, 0.0});
}

DenseOperator constant_filter(const DenseOperator& a, const EigenSystem& eig) {
  return apply_filter(a, eig, {FilterFamily::Constant, 0.0, 0.0});
}

namespace {

// Simpson weights on n (even) intervals of width h.
double simpson_weight(long i, long n, double h) {
  if (i == 0 || i == n) return h / 3.0;
  return (i % 2 ? 4.0 : 2.0) * h / 3.0;
}

long even_intervals(double length, double step) {
  auto n = static_cast<long>(std::ceil(length / step - 1e-9));
  return std::max(2L, n + (n % 2));
}

}  // namespace

DenseOperator time_domain_oracle(const DenseOperator& a, const EigenSystem& eig,
                                 const FilterSpec& spec, const QuadratureSpec& quad) {
  require(spec.family != FilterFamily::Constant, ErrorCode::InvalidArgument,
          "the constant filter has no integrable time-domain kernel");
  require_alpha(spec.alpha);
  require(quad.step > 0.0 && quad.cutoff > 0.0, ErrorCode::InvalidArgument,
          "quadrature needs positive step and cutoff");
  require(quad.tol > 0.0 && quad.tol < 1.0, ErrorCode::InvalidArgument, "tol must lie in (0, 1)");
  require(quad.cutoff >= std::sqrt(std::log(1.0 / quad.tol) / spec.alpha), ErrorCode::OutOfRange,
          "cutoff too small for the requested tolerance");
  require(2.0 * quad.cutoff / quad.step <= 1e7, ErrorCode::OutOfRange,
          "quadrature would need more than 1e7 evaluations");
  require(a.entries.rows() == eig.dim(), ErrorCode::DimensionMismatch,
          "operator and eigensystem dimensions differ");

  const Mat a_eig = eig.to_eigenbasis(a.entries);
  const RealVec& e = eig.energies;
  const double alpha = spec.alpha;
  auto g = [&](double t) {  // e^{-alpha t^2} A(t) in the eigenbasis
    return Mat(evolve_eigenbasis(a_eig, e, t) * std::exp(-alpha * t * t));
  };

  Mat acc = Mat::Zero(a_eig.rows(), a_eig.cols());
  if (spec.family == FilterFamily::HighPass) {
    // (i / 2 pi) [PV int g(t) / t dt - i pi g(0)], the principal value folded
    // onto (epsilon, T].
    require(quad.epsilon > 0.0 && quad.epsilon < quad.cutoff, ErrorCode::InvalidArgument,
            "epsilon must lie in (0, T)");
    const long n = even_intervals(quad.cutoff - quad.epsilon, quad.step);
    const double h = (quad.cutoff - quad.epsilon) / static_cast<double>(n);
    for (long i = 0; i <= n; ++i) {
      const double t = quad.epsilon + h * static_cast<double>(i);
      acc += (simpson_weight(i, n, h) / t) * (g(t) - g(-t));
    }
    const cplx pref(0.0, 1.0 / (2.0 * std::numbers::pi));
    acc = pref * acc + 0.5 * a_eig;
  } else {
    const double shift = spec.family == FilterFamily::ShiftedGaussian ? spec.shift : 0.0;
    const long n = even_intervals(2.0 * quad.cutoff, quad.step);
    const double h = 2.0 * quad.cutoff / static_cast<double>(n);
    const double norm = std::sqrt(alpha / std::numbers::pi);
    for (long i = 0; i <= n; ++i) {
      const double t = -quad.cutoff + h * static_cast<double>(i);
      acc += (simpson_weight(i, n, h) * norm * std::polar(1.0, t * shift)) * g(t);
    }
  }
  return {eig.from_eigenbasis(acc), a.support, a.space};
}

DecoupledCheck decoupled_filter_check(const DenseOperator& a, const DenseOperator& b,
                                      const DenseOperator& h_a, const DenseOperator& h_b,
                                      double alpha) {
  require_alpha(alpha);
  require(set_union(h_a.space, h_b.space).size() == h_a.space.size() + h_b.space.size(),
          ErrorCode::InvalidArgument,
          "restricted Hamiltonians overlap; their commutation is not guaranteed");
  const DenseOperator a_loc = a.space == h_a.space ? a : reduce_operator(a, h_a.space);
  const DenseOperator b_loc = b.space == h_b.space ? b : reduce_operator(b, h_b.space);

  const EigenSystem eig_a = diagonalize(h_a);
  const EigenSystem eig_b = diagonalize(h_b);
  const SiteSet joint = set_union(h_a.space, h_b.space);
  DenseOperator h_joint = embed(h_a, joint);
  h_joint.entries += embed(h_b, joint).entries;
  h_joint.support = joint;
  const EigenSystem eig_joint = diagonalize(h_joint);

  DenseOperator ab = embed(a_loc, joint);
  ab.entries = ab.entries * embed(b_loc, joint).entries;
  ab.support = set_union(a_loc.support, b_loc.support);

  const Mat lhs = gaussian_filter(ab, eig_joint, alpha).entries;
  const Mat rhs = embed(gaussian_filter(a_loc, eig_a, alpha), joint).entries *
                  embed(gaussian_filter(b_loc, eig_b, alpha), joint).entries;

  DecoupledCheck out;
  out.error_norm = spectral_norm(lhs - rhs);
  const auto aii = check_assumption_aii(eig_a, eig_b, 0.0);
  out.eta = aii.eta;
  out.gamma_tilde = aii.gamma_tilde;
  out.xi_gap = std::min(aii.eta, std::numbers::sqrt2 * aii.gamma_tilde);
  out.n_sites = static_cast<int>(joint.size());
  out.bound = std::ldexp(std::exp(-out.xi_gap * out.xi_gap / (4.0 * alpha)), 4 * out.n_sites + 1);
  return out;
}

HastingsKomaResult hastings_koma_check(double e, double alpha, double gamma) {
  require_alpha(alpha);
  require(gamma > 0.0, ErrorCode::InvalidArgument, "gamma must be positive");
  require(e <= -gamma || e >= gamma, ErrorCode::OutOfRange,
          "energy lies strictly between -gamma and gamma; no branch applies");
  HastingsKomaResult out;
  // Half-Gaussian integral = 1/2 erfc(-E / (2 sqrt(alpha))); its distance to 1
  // is 1/2 erfc(E / (2 sqrt(alpha))).
  const double scale = 2.0 * std::sqrt(alpha);
  out.value = e <= -gamma ? 0.5 * std::erfc(-e / scale) : 0.5 * std::erfc(e / scale);
  out.bound = 0.5 * std::exp(-gamma * gamma / (4.0 * alpha));
  out.slack = out.bound - out.value;
  out.holds = out.slack >= -1e-12;
  return out;
}

LocalityProbe highpass_locality_probe(Eigen::Index k, const DenseOperator& a,
                                      const DenseOperator& b, const EigenSystem& eig, double alpha,
                                      double mu, double d) {
  require_alpha(alpha);
  require(k >= 0 && k < eig.dim(), ErrorCode::OutOfRange, "level index out of range");
  require(b.dim() == eig.dim(), ErrorCode::DimensionMismatch,
          "operator and eigensystem dimensions differ");
  const Mat g_eig = filter_eigenbasis(eig.to_eigenbasis(a.entries), eig.energies,
                                      {FilterFamily::HighPass, alpha, 0.0}, 0.0);
  const Mat b_eig = eig.to_eigenbasis(b.entries);
  // <k|[G, B]|k> = sum_l G_kl B_lk - B_kl G_lk
  const cplx value = (g_eig.row(k) * b_eig.col(k))(0, 0) - (b_eig.row(k) * g_eig.col(k))(0, 0);
  LocalityProbe out;
  out.value = std::abs(value);
  out.bound = std::exp(-mu * d) * (4.0 + std::log(std::numbers::pi / (4.0 * alpha))) /
              (2.0 * std::numbers::pi);
  return out;
}

}  // namespace mbl
