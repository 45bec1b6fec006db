#pragma once

#include "types.hpp"

namespace mbl {

// Largest absolute entry, 0 for an empty matrix.
double max_abs(const Mat& m);

bool is_hermitian(const Mat& m, double rel_tol = 1e-12);

// Eigen-decomposition of a Hermitian matrix. The matrix is split into the
// connected components of its exact nonzero pattern (symmetry sectors of the
// shipped models) and each block goes to LAPACK divide-and-conquer.
// Eigenvalues are ascending; ties keep block order.
struct HermitianEigen {
  RealVec values;
  Mat vectors;
};
HermitianEigen hermitian_eigensystem(const Mat& m);
RealVec hermitian_eigenvalues(const Mat& m);

// Connected components of the nonzero pattern, each sorted ascending, ordered
// by their smallest index.
std::vector<std::vector<Eigen::Index>> block_components(const Mat& m);

double spectral_norm(const Mat& m);
double frobenius_norm(const Mat& m);
// Sum of singular values.
double trace_norm(const Mat& m);

Mat commutator(const Mat& a, const Mat& b);

// Product that switches to sparse kernels when an operand is mostly zeros.
Mat product(const Mat& a, const Mat& b);

Mat kron(const Mat& a, const Mat& b);

// True when every entry has zero imaginary part.
bool is_real(const Mat& m);

}  // namespace mbl
