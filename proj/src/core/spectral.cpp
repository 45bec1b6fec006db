#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/LevenbergMarquardt>

#include "error.hpp"
#include "linalg.hpp"

namespace mbl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool mostly_zero(const Mat& m) {
  if (m.rows() < 64) return false;
  Eigen::Index nnz = 0;
  for (Eigen::Index i = 0; i < m.size(); ++i) nnz += m.data()[i] != cplx(0.0, 0.0);
  return nnz * 20 < m.size();
}

Mat real_sandwich(const RealMat& left, const Mat& a, const RealMat& right) {
  const RealMat re = left * a.real() * right;
  const RealMat im = left * a.imag() * right;
  Mat out(re.rows(), re.cols());
  out.real() = re;
  out.imag() = im;
  return out;
}

double min_consecutive_gap(const RealVec& sorted) {
  double best = kInf;
  for (Eigen::Index i = 1; i < sorted.size(); ++i) best = std::min(best, sorted(i) - sorted(i - 1));
  return best;
}

std::vector<double> off_diagonal_gaps(const RealVec& e) {
  std::vector<double> gaps;
  gaps.reserve(static_cast<std::size_t>(e.size() * std::max<Eigen::Index>(e.size() - 1, 0)));
  for (Eigen::Index a = 0; a < e.size(); ++a)
    for (Eigen::Index b = 0; b < e.size(); ++b)
      if (a != b) gaps.push_back(e(a) - e(b));
  std::sort(gaps.begin(), gaps.end());
  return gaps;
}

// min |x - y| over x in xs, y in ys; both ascending.
double min_cross_difference(const std::vector<double>& xs, const std::vector<double>& ys) {
  double best = kInf;
  std::size_t j = 0;
  for (double x : xs) {
    while (j < ys.size() && ys[j] < x) ++j;
    if (j < ys.size()) best = std::min(best, ys[j] - x);
    if (j > 0) best = std::min(best, x - ys[j - 1]);
  }
  return best;
}

RealVec sorted_copy(const RealVec& v) {
  RealVec s = v;
  std::sort(s.data(), s.data() + s.size());
  return s;
}

struct GaussianResidual : Eigen::DenseFunctor<double> {
  const std::vector<double>& xs;
  const std::vector<double>& ys;

  GaussianResidual(const std::vector<double>& x, const std::vector<double>& y)
      : Eigen::DenseFunctor<double>(3, static_cast<int>(x.size())), xs(x), ys(y) {}

  int operator()(const InputType& p, ValueType& f) const {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double u = (xs[i] - p(1)) / p(2);
      f(static_cast<Eigen::Index>(i)) = p(0) * std::exp(-0.5 * u * u) - ys[i];
    }
    return 0;
  }

  int df(const InputType& p, JacobianType& jac) const {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      const double u = (xs[i] - p(1)) / p(2);
      const double g = std::exp(-0.5 * u * u);
      jac(r, 0) = g;
      jac(r, 1) = p(0) * g * u / p(2);
      jac(r, 2) = p(0) * g * u * u / p(2);
    }
    return 0;
  }
};

}  // namespace

double EigenSystem::norm() const {
  if (energies.size() == 0) return 0.0;
  return std::max(std::abs(energies(0)), std::abs(energies(energies.size() - 1)));
}

double EigenSystem::default_tolerance() const {
  const double n = norm();
  return 1e-10 * (n > 0.0 ? n : 1.0);
}

Mat EigenSystem::to_eigenbasis(const Mat& a) const {
  require(a.rows() == dim() && a.cols() == dim(), ErrorCode::DimensionMismatch,
          "operator and eigensystem dimensions differ");
  if (mostly_zero(vectors)) return product(Mat(vectors.adjoint()), product(a, vectors));
  if (real_vectors.size() != 0) return real_sandwich(real_vectors.transpose(), a, real_vectors);
  return vectors.adjoint() * a * vectors;
}

Mat EigenSystem::from_eigenbasis(const Mat& a) const {
  require(a.rows() == dim() && a.cols() == dim(), ErrorCode::DimensionMismatch,
          "operator and eigensystem dimensions differ");
  if (mostly_zero(vectors)) return product(vectors, product(a, Mat(vectors.adjoint())));
  if (real_vectors.size() != 0) return real_sandwich(real_vectors, a, real_vectors.transpose());
  return vectors * a * vectors.adjoint();
}

Mat EigenSystem::reconstruct() const {
  return from_eigenbasis(energies.cast<cplx>().asDiagonal().toDenseMatrix());
}

EigenSystem make_eigensystem(RealVec energies, Mat vectors) {
  require(vectors.rows() == vectors.cols() && vectors.rows() == energies.size(),
          ErrorCode::DimensionMismatch, "eigensystem shape mismatch");
  EigenSystem eig;
  eig.energies = std::move(energies);
  eig.vectors = std::move(vectors);
  if (is_real(eig.vectors)) eig.real_vectors = eig.vectors.real();
  return eig;
}

EigenSystem diagonalize(const Mat& h) {
  require(h.rows() == h.cols(), ErrorCode::DimensionMismatch, "Hamiltonian must be square");
  require(is_hermitian(h, 1e-12), ErrorCode::NotHermitian, "operator is not Hermitian");
  HermitianEigen sol = hermitian_eigensystem(h);
  return make_eigensystem(std::move(sol.values), std::move(sol.vectors));
}

EigenSystem diagonalize(const DenseOperator& h) { return diagonalize(h.entries); }

RealVec eigenvalues(const DenseOperator& h) {
  require(is_hermitian(h.entries, 1e-12), ErrorCode::NotHermitian, "operator is not Hermitian");
  return hermitian_eigenvalues(h.entries);
}

AssumptionAI check_assumption_ai(const RealVec& energies, double tol) {
  AssumptionAI out;
  out.gamma = min_consecutive_gap(sorted_copy(energies));
  out.holds = out.gamma > tol;
  return out;
}

AssumptionAI check_assumption_ai(const EigenSystem& eig, double tol) {
  return check_assumption_ai(eig.energies, tol);
}

AssumptionAII check_assumption_aii(const RealVec& energies_a, const RealVec& energies_b,
                                   double tol) {
  AssumptionAII out;
  const double gamma_a = min_consecutive_gap(sorted_copy(energies_a));
  const double gamma_b = min_consecutive_gap(sorted_copy(energies_b));
  out.gamma_tilde = std::min(gamma_a, gamma_b);
  // Pairs with exactly one side diagonal reduce to |E_a - E_a'| or |E_b - E_b'|,
  // whose minima are the two smallest gaps.
  const double cross =
      min_cross_difference(off_diagonal_gaps(energies_a), off_diagonal_gaps(energies_b));
  out.eta = std::min(cross, out.gamma_tilde);
  out.holds = out.gamma_tilde > tol && out.eta > tol;
  return out;
}

AssumptionAII check_assumption_aii(const EigenSystem& eig_a, const EigenSystem& eig_b,
                                   double tol) {
  return check_assumption_aii(eig_a.energies, eig_b.energies, tol);
}

AssumptionAIII check_assumption_aiii(const RealVec& energies, Eigen::Index k, double tol) {
  require(k >= 0 && k < energies.size(), ErrorCode::OutOfRange, "level index out of range");
  // Sorting the distances |E_r - E_k| turns the pair minimum into a minimum
  // over neighbours.
  RealVec dist = (energies.array() - energies(k)).abs();
  std::sort(dist.data(), dist.data() + dist.size());
  AssumptionAIII out;
  out.zeta = min_consecutive_gap(dist);
  out.holds = out.zeta > tol;
  return out;
}

AssumptionAIII check_assumption_aiii(const EigenSystem& eig, Eigen::Index k, double tol) {
  return check_assumption_aiii(eig.energies, k, tol);
}

GapReport gap_report(const RealVec& energies, const RealVec& energies_a,
                     const RealVec& energies_b, double tol) {
  GapReport report;
  const auto ai = check_assumption_ai(energies, tol);
  const auto aii = check_assumption_aii(energies_a, energies_b, tol);
  report.gamma = ai.gamma;
  report.gamma_tilde = aii.gamma_tilde;
  report.eta = aii.eta;
  report.degenerate_ai = !ai.holds;
  report.degenerate_aii = !aii.holds;
  report.zeta.resize(static_cast<std::size_t>(energies.size()));
  for (Eigen::Index k = 0; k < energies.size(); ++k) {
    const auto aiii = check_assumption_aiii(energies, k, tol);
    report.zeta[static_cast<std::size_t>(k)] = aiii.zeta;
    report.degenerate_aiii = report.degenerate_aiii || !aiii.holds;
  }
  return report;
}

std::size_t idos(const RealVec& energies, double e) {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < energies.size(); ++i) count += energies(i) <= e ? 1 : 0;
  return count;
}

std::size_t idos(const EigenSystem& eig, double e) { return idos(eig.energies, e); }

DosHistogram dos_histogram(const std::vector<RealVec>& ensemble, int bins) {
  require(!ensemble.empty(), ErrorCode::InvalidArgument, "empty ensemble");
  require(bins >= 1, ErrorCode::InvalidArgument, "bin count must be positive");
  DosHistogram hist;
  hist.lo = kInf;
  hist.hi = -kInf;
  for (const auto& e : ensemble) {
    require(e.size() > 0, ErrorCode::InvalidArgument, "empty spectrum in ensemble");
    hist.lo = std::min(hist.lo, e.minCoeff());
    hist.hi = std::max(hist.hi, e.maxCoeff());
  }
  const double width = (hist.hi - hist.lo) / bins;
  const auto nb = static_cast<std::size_t>(bins);
  hist.centers.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) hist.centers[b] = hist.lo + (static_cast<double>(b) + 0.5) * width;

  hist.counts.assign(ensemble.size(), std::vector<double>(nb, 0.0));
  for (std::size_t r = 0; r < ensemble.size(); ++r) {
    const auto& e = ensemble[r];
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      std::size_t b = 0;
      if (width > 0.0) {
        const double pos = std::floor((e(i) - hist.lo) / width);
        b = pos < 0.0 ? 0 : std::min(nb - 1, static_cast<std::size_t>(pos));
      }
      hist.counts[r][b] += 1.0;
    }
  }

  hist.mean.assign(nb, 0.0);
  hist.variance.assign(nb, 0.0);
  const double reps = static_cast<double>(ensemble.size());
  for (std::size_t b = 0; b < nb; ++b) {
    double sum = 0.0;
    for (const auto& c : hist.counts) sum += c[b];
    const double mean = sum / reps;
    double var = 0.0;
    for (const auto& c : hist.counts) var += (c[b] - mean) * (c[b] - mean);
    hist.mean[b] = mean;
    hist.variance[b] = var / reps;
  }
  return hist;
}

GaussianFit gaussian_fit(const std::vector<double>& centers, const std::vector<double>& counts) {
  require(centers.size() == counts.size(), ErrorCode::DimensionMismatch,
          "centers and counts differ in length");
  std::size_t nonzero = 0;
  double total = 0.0, first = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] != 0.0) ++nonzero;
    total += counts[i];
    first += counts[i] * centers[i];
    peak = std::max(peak, counts[i]);
  }
  require(nonzero >= 3, ErrorCode::InsufficientData,
          "Gaussian fit needs at least three nonzero bins");
  const double mean = first / total;
  double second = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    second += counts[i] * (centers[i] - mean) * (centers[i] - mean);
  double spread = std::sqrt(second / total);
  const double bin = centers.size() > 1 ? std::abs(centers[1] - centers[0]) : 1.0;
  spread = std::max(spread, 0.5 * bin);

  Eigen::VectorXd p(3);
  p << peak, mean, spread;
  GaussianResidual functor(centers, counts);
  Eigen::LevenbergMarquardt<GaussianResidual> lm(functor);
  lm.setMaxfev(2000);
  lm.minimize(p);

  GaussianFit fit;
  fit.amplitude = p(0);
  fit.mean = p(1);
  fit.stddev = std::abs(p(2));
  double err2 = 0.0, norm2 = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double u = (centers[i] - fit.mean) / fit.stddev;
    const double model = fit.amplitude * std::exp(-0.5 * u * u);
    err2 += (model - counts[i]) * (model - counts[i]);
    norm2 += counts[i] * counts[i];
  }
  fit.rel_l2_error = std::sqrt(err2 / norm2);
  return fit;
}

}  // namespace mbl
