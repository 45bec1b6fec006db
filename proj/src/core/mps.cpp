#include "mps.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include <Eigen/SVD>

#include "error.hpp"

namespace mbl {

namespace {

int checked_site_count(Eigen::Index length, int local_dim) {
  require(local_dim >= 2, ErrorCode::InvalidArgument, "local dimension must be at least 2");
  int n = 0;
  Eigen::Index dim = 1;
  while (dim < length) {
    dim *= local_dim;
    ++n;
  }
  require(dim == length && n >= 1, ErrorCode::InvalidArgument,
          "state length is not a power of the local dimension");
  return n;
}

void put_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ofstream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

}  // namespace

double MpsState::total_discarded() const {
  double sum = 0.0;
  for (double w : discarded) sum += w;
  return sum;
}

MpsState dense_to_mps(const Vec& state, int n, const TruncationPolicy& policy, int local_dim) {
  require(checked_site_count(state.size(), local_dim) == n, ErrorCode::InvalidArgument,
          "state length does not match the site count");
  require(policy.max_bond >= 0 && policy.weight_threshold >= 0.0, ErrorCode::InvalidArgument,
          "invalid truncation policy");
  const double norm = state.norm();
  require(std::abs(norm - 1.0) <= 1e-8, ErrorCode::InvalidArgument, "state must be normalized");

  MpsState mps;
  mps.n_sites = n;
  mps.local_dim = local_dim;
  mps.bond_dims.assign(static_cast<std::size_t>(n + 1), 1);

  const int d = local_dim;
  Eigen::Index rest = state.size();
  int left = 1;
  // remainder(a, x): left bond a, remaining sites x (first remaining site most significant)
  Mat remainder = Mat(state.transpose());

  for (int site = 0; site < n - 1; ++site) {
    rest /= d;
    Mat m(static_cast<Eigen::Index>(left) * d, rest);
    for (int a = 0; a < left; ++a)
      for (int i = 0; i < d; ++i)
        m.row(static_cast<Eigen::Index>(a) * d + i) = remainder.row(a).segment(i * rest, rest);

    Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVec& s = svd.singularValues();
    Eigen::Index keep = 0;
    const double s_max = s.size() ? s(0) : 0.0;
    while (keep < s.size() && s(keep) >= 1e-14 * s_max && s(keep) > 0.0) ++keep;
    keep = std::max<Eigen::Index>(keep, 1);
    if (policy.max_bond > 0) keep = std::min<Eigen::Index>(keep, policy.max_bond);
    if (policy.weight_threshold > 0.0) {
      double dropped = 0.0;
      for (Eigen::Index j = s.size(); j-- > keep;) dropped += s(j) * s(j);
      while (keep > 1 && dropped + s(keep - 1) * s(keep - 1) <= policy.weight_threshold) {
        --keep;
        dropped += s(keep) * s(keep);
      }
    }
    double discarded = 0.0;
    for (Eigen::Index j = s.size(); j-- > keep;) discarded += s(j) * s(j);

    SiteTensor t;
    t.left = left;
    t.phys = d;
    t.right = static_cast<int>(keep);
    t.data.resize(static_cast<std::size_t>(left) * d * keep);
    for (int a = 0; a < left; ++a)
      for (int i = 0; i < d; ++i)
        for (Eigen::Index b = 0; b < keep; ++b)
          t.at(a, i, static_cast<int>(b)) = svd.matrixU()(static_cast<Eigen::Index>(a) * d + i, b);
    mps.tensors.push_back(std::move(t));

    remainder = s.head(keep).cast<cplx>().asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
    left = static_cast<int>(keep);
    mps.bond_dims[static_cast<std::size_t>(site + 1)] = left;
    mps.discarded.push_back(discarded);
  }

  SiteTensor last;
  last.left = left;
  last.phys = d;
  last.right = 1;
  last.data.resize(static_cast<std::size_t>(left) * d);
  const double rem_norm = remainder.norm();
  require(rem_norm > 0.0, ErrorCode::Internal, "truncation removed the whole state");
  for (int a = 0; a < left; ++a)
    for (int i = 0; i < d; ++i) last.at(a, i, 0) = remainder(a, i) / rem_norm;
  mps.tensors.push_back(std::move(last));
  mps.normalized = true;
  return mps;
}

Vec mps_to_dense(const MpsState& mps) {
  require(!mps.tensors.empty(), ErrorCode::InvalidArgument, "empty MPS");
  // acc(x, b): prefix configuration x, open right bond b
  Mat acc = Mat::Ones(1, 1);
  for (const auto& t : mps.tensors) {
    require(acc.cols() == t.left, ErrorCode::DimensionMismatch, "inconsistent bond dimensions");
    Mat next = Mat::Zero(acc.rows() * t.phys, t.right);
    for (Eigen::Index x = 0; x < acc.rows(); ++x)
      for (int i = 0; i < t.phys; ++i)
        for (int b = 0; b < t.right; ++b) {
          cplx sum(0.0, 0.0);
          for (int a = 0; a < t.left; ++a) sum += acc(x, a) * t.at(a, i, b);
          next(x * t.phys + i, b) = sum;
        }
    acc = std::move(next);
  }
  require(acc.cols() == 1, ErrorCode::DimensionMismatch, "right boundary bond must be 1");
  return acc.col(0);
}

double mps_fidelity(const MpsState& mps, const Vec& state) {
  const Vec dense = mps_to_dense(mps);
  require(dense.size() == state.size(), ErrorCode::DimensionMismatch,
          "MPS and state dimensions differ");
  return std::abs(state.dot(dense));
}

double entanglement_entropy(const Vec& state, int cut, int local_dim) {
  const int n = checked_site_count(state.size(), local_dim);
  require(cut >= 1 && cut <= n - 1, ErrorCode::OutOfRange, "cut must lie in [1, n-1]");
  Eigen::Index rows = 1;
  for (int i = 0; i < cut; ++i) rows *= local_dim;
  const Eigen::Index cols = state.size() / rows;
  // m(x, y) = psi(x * cols + y); the column-major map of psi has shape cols x rows.
  const Eigen::Map<const Mat> mt(state.data(), cols, rows);
  const Mat gram = rows <= cols ? Mat(mt.adjoint() * mt) : Mat(mt * mt.adjoint());
  const RealVec lambda = Eigen::SelfAdjointEigenSolver<Mat>(gram, Eigen::EigenvaluesOnly).eigenvalues();
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) >= 1e-14) entropy -= lambda(i) * std::log2(lambda(i));
  return entropy;
}

EntropyProfile entropy_profile(const Vec& state, int local_dim) {
  const int n = checked_site_count(state.size(), local_dim);
  EntropyProfile p;
  for (int cut = 1; cut < n; ++cut) p.entropies.push_back(entanglement_entropy(state, cut, local_dim));
  double sum = 0.0;
  for (double e : p.entropies) sum += e;
  p.cut_average = p.entropies.empty() ? 0.0 : sum / static_cast<double>(p.entropies.size());
  return p;
}

double smooth_max_entropy(const std::vector<double>& rho_eigenvalues, double delta) {
  require(delta > 0.0 && delta < 1.0, ErrorCode::InvalidArgument, "delta must lie in (0, 1)");
  require(!rho_eigenvalues.empty(), ErrorCode::InvalidArgument, "empty spectrum");
  std::vector<double> lam = rho_eigenvalues;
  std::sort(lam.begin(), lam.end(), std::greater<>());
  double total = 0.0;
  for (double v : lam) total += v;
  require(std::abs(total - 1.0) <= 1e-10, ErrorCode::InvalidArgument,
          "eigenvalues must sum to one");
  // Grow the dropped tail from the smallest eigenvalue while it stays within delta.
  std::size_t rank = lam.size();
  double tail = 0.0;
  while (rank > 1 && tail + lam[rank - 1] <= delta) {
    tail += lam[rank - 1];
    --rank;
  }
  return std::log2(static_cast<double>(rank));
}

BondDimensionEstimate corollary_bond_dimension(double n, double epsilon, double mu, double big_c,
                                               double c, double c_prime) {
  require(n > 0.0 && epsilon > 0.0 && mu > 0.0 && big_c > 0.0 && c > 0.0 && c_prime > 0.0,
          ErrorCode::InvalidArgument, "bond-dimension arguments must be positive");
  require(epsilon < 1.0, ErrorCode::InvalidArgument, "epsilon must be below 1");
  const double log2e = std::numbers::log2e;
  BondDimensionEstimate est;
  est.xi_corr = 2.0 / (mu * log2e);
  est.exponent = 8.0 * est.xi_corr;
  est.main_text_exponent = 16.0 / (mu * log2e);
  est.identity_error = std::abs(est.exponent - est.main_text_exponent);
  require(est.identity_error <= 1e-12 * std::max(1.0, est.exponent), ErrorCode::Internal,
          "bond-dimension exponent identity violated");
  const double xi = est.xi_corr;
  est.log2_d = c_prime * std::pow(xi, c * xi + 1.0) * std::log2(big_c) +
               est.exponent * std::log2(3.0 * n / epsilon);
  est.d = std::exp2(est.log2_d);
  return est;
}

void export_mps(const MpsState& mps, const std::string& path) {
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::Io, "cannot write MPS file " + path);
    for (const auto& t : mps.tensors) {
      put_u64(out, static_cast<std::uint64_t>(t.left));
      put_u64(out, static_cast<std::uint64_t>(t.phys));
      put_u64(out, static_cast<std::uint64_t>(t.right));
      for (const cplx& v : t.data) {
        put_f64(out, v.real());
        put_f64(out, v.imag());
      }
    }
    require(out.good(), ErrorCode::Io, "write failed for MPS file " + path);
  }
  std::ofstream txt(path + ".txt", std::ios::trunc);
  require(txt.good(), ErrorCode::Io, "cannot write MPS sidecar " + path + ".txt");
  char buf[64];
  txt << "n_sites " << mps.n_sites << "\nlocal_dim " << mps.local_dim << "\nbond_dims";
  for (int b : mps.bond_dims) txt << ' ' << b;
  txt << "\ndiscarded";
  for (double w : mps.discarded) {
    std::snprintf(buf, sizeof buf, " %.17g", w);
    txt << buf;
  }
  txt << '\n';
}

}  // namespace mbl
