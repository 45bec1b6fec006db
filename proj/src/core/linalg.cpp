#include "linalg.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/SparseCore>
#include <lapacke.h>

#include "error.hpp"

namespace mbl {

namespace {

using SpMat = Eigen::SparseMatrix<cplx>;

struct DisjointSets {
  std::vector<Eigen::Index> parent;
  explicit DisjointSets(Eigen::Index n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  }
  Eigen::Index find(Eigen::Index x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(Eigen::Index a, Eigen::Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[a] = b;
  }
};

Eigen::Index count_nonzeros(const Mat& m) {
  Eigen::Index nnz = 0;
  const cplx* p = m.data();
  for (Eigen::Index i = 0; i < m.size(); ++i) nnz += (p[i] != cplx(0.0, 0.0)) ? 1 : 0;
  return nnz;
}

bool mostly_zero(const Mat& m) {
  if (m.rows() < 64 || m.cols() < 64) return false;
  return count_nonzeros(m) * 20 < m.size();
}

SpMat to_sparse(const Mat& m) { return m.sparseView(cplx(0.0, 0.0), 0.0); }

// Dense LAPACK solve of one Hermitian block. Writes eigenvectors into `vecs`
// when it is non-null.
void solve_block(const Mat& block, RealVec& vals, Mat* vecs) {
  const lapack_int n = static_cast<lapack_int>(block.rows());
  vals.resize(n);
  const char jobz = vecs ? 'V' : 'N';
  lapack_int info = 0;
  if (is_real(block)) {
    RealMat work = block.real();
    info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, jobz, 'U', n, work.data(), n, vals.data());
    if (vecs) *vecs = work.cast<cplx>();
  } else {
    Mat work = block;
    info = LAPACKE_zheevd(LAPACK_COL_MAJOR, jobz, 'U', n,
                          reinterpret_cast<lapack_complex_double*>(work.data()), n, vals.data());
    if (vecs) *vecs = std::move(work);
  }
  require(info == 0, ErrorCode::NoConvergence,
          "Hermitian eigensolver failed (LAPACK info " + std::to_string(info) + ")");
}

HermitianEigen blocked_eigen(const Mat& m, bool want_vectors) {
  require(m.rows() == m.cols(), ErrorCode::DimensionMismatch, "eigensolver needs a square matrix");
  const Eigen::Index dim = m.rows();
  HermitianEigen out;
  out.values.resize(dim);
  if (want_vectors) out.vectors = Mat::Zero(dim, dim);
  if (dim == 0) return out;

  const auto blocks = block_components(m);
  struct Level {
    double value;
    std::size_t block;
    Eigen::Index local;
  };
  std::vector<Level> levels;
  levels.reserve(static_cast<std::size_t>(dim));
  std::vector<Mat> block_vectors(blocks.size());
  std::vector<RealVec> block_values(blocks.size());

  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& idx = blocks[b];
    const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
    Mat sub(k, k);
    for (Eigen::Index c = 0; c < k; ++c)
      for (Eigen::Index r = 0; r < k; ++r) sub(r, c) = m(idx[r], idx[c]);
    solve_block(sub, block_values[b], want_vectors ? &block_vectors[b] : nullptr);
    for (Eigen::Index j = 0; j < k; ++j) levels.push_back({block_values[b](j), b, j});
  }

  std::stable_sort(levels.begin(), levels.end(),
                   [](const Level& a, const Level& b) { return a.value < b.value; });

  for (Eigen::Index col = 0; col < dim; ++col) {
    const Level& lv = levels[static_cast<std::size_t>(col)];
    out.values(col) = lv.value;
    if (!want_vectors) continue;
    const auto& idx = blocks[lv.block];
    for (std::size_t r = 0; r < idx.size(); ++r)
      out.vectors(idx[r], col) = block_vectors[lv.block](static_cast<Eigen::Index>(r), lv.local);
  }
  return out;
}

RealVec singular_values(const Mat& m) {
  Mat work = m;
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  RealVec s(std::min(rows, cols));
  if (s.size() == 0) return s;
  const lapack_int info =
      LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', rows, cols,
                     reinterpret_cast<lapack_complex_double*>(work.data()), rows, s.data(), nullptr,
                     1, nullptr, 1);
  require(info == 0, ErrorCode::NoConvergence, "SVD failed to converge");
  return s;
}

}  // namespace

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_real(const Mat& m) {
  const cplx* p = m.data();
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (p[i].imag() != 0.0) return false;
  return true;
}

bool is_hermitian(const Mat& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = max_abs(m);
  if (scale == 0.0) return true;
  return max_abs(m - m.adjoint()) <= rel_tol * scale;
}

std::vector<std::vector<Eigen::Index>> block_components(const Mat& m) {
  const Eigen::Index dim = m.rows();
  DisjointSets sets(dim);
  // Column-major sweep over both triangles keeps the reads contiguous.
  for (Eigen::Index c = 0; c < dim; ++c) {
    const cplx* col = m.data() + c * dim;
    for (Eigen::Index r = 0; r < dim; ++r)
      if (r != c && col[r] != cplx(0.0, 0.0)) sets.unite(r, c);
  }

  std::vector<std::vector<Eigen::Index>> blocks;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(dim), -1);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Eigen::Index root = sets.find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Eigen::Index>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[root]].push_back(i);
  }
  return blocks;
}

HermitianEigen hermitian_eigensystem(const Mat& m) { return blocked_eigen(m, true); }

RealVec hermitian_eigenvalues(const Mat& m) { return blocked_eigen(m, false).values; }

double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  const double scale = max_abs(m);
  if (scale == 0.0) return 0.0;
  if (m.rows() == m.cols()) {
    // A symmetric permutation to block-diagonal form leaves the norm unchanged.
    const auto blocks = block_components(m);
    if (blocks.size() > 1) {
      double best = 0.0;
      for (const auto& idx : blocks) {
        const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
        if (k == 1) {
          best = std::max(best, std::abs(m(idx[0], idx[0])));
          continue;
        }
        Mat sub(k, k);
        for (Eigen::Index c = 0; c < k; ++c)
          for (Eigen::Index r = 0; r < k; ++r) sub(r, c) = m(idx[r], idx[c]);
        best = std::max(best, spectral_norm(sub));
      }
      return best;
    }
    const double herm_tol = 1e-13 * scale;
    if (max_abs(m - m.adjoint()) <= herm_tol) {
      const Mat h = 0.5 * (m + m.adjoint());
      return hermitian_eigenvalues(h).cwiseAbs().maxCoeff();
    }
    if (max_abs(m + m.adjoint()) <= herm_tol) {
      const Mat h = cplx(0.0, 0.5) * (m - m.adjoint());
      return hermitian_eigenvalues(h).cwiseAbs().maxCoeff();
    }
  }
  return singular_values(m).maxCoeff();
}

double frobenius_norm(const Mat& m) { return m.norm(); }

double trace_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  if (is_hermitian(m, 1e-13)) {
    const Mat h = 0.5 * (m + m.adjoint());
    return hermitian_eigenvalues(h).cwiseAbs().sum();
  }
  return singular_values(m).sum();
}

Mat commutator(const Mat& a, const Mat& b) { return product(a, b) - product(b, a); }

Mat product(const Mat& a, const Mat& b) {
  require(a.cols() == b.rows(), ErrorCode::DimensionMismatch, "matrix product shape mismatch");
  const bool sa = mostly_zero(a);
  const bool sb = mostly_zero(b);
  if (sa && sb) return Mat(to_sparse(a) * to_sparse(b));
  if (sa) return to_sparse(a) * b;
  if (sb) return a * to_sparse(b);
  return a * b;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace mbl
