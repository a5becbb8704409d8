#pragma once

#include "lgm/tensor.hpp"

namespace lgm {

/// Spectral decomposition M = U diag(eigenvalues) U* of a Hermitian matrix.
struct HermitianEig {
    Eigen::VectorXd eigenvalues; // ascending
    Matrix eigenvectors;         // columns, unitary
};

/// Symmetrizes (M + M*)/2 before decomposing. Throws ShapeError when M is not square.
HermitianEig eig_hermitian(const Matrix& m);
HermitianEig eig_hermitian(const Tensor& m);

/// Moore-Penrose inverse of a Hermitian matrix. Eigenvalues with
/// |lambda| < rel_cutoff * max|lambda| are treated as zero.
Matrix pseudoinverse(const Matrix& m, double rel_cutoff = 1e-8);
Tensor pseudoinverse(const Tensor& m, double rel_cutoff = 1e-8);

/// Matrix exponential. Hermitian and skew-Hermitian arguments go through the
/// eigendecomposition; anything else uses Pade scaling-and-squaring.
Matrix expm(const Matrix& m);
Tensor expm(const Tensor& m);

/// exp of a skew-Hermitian matrix via the eigendecomposition of i*A.
Matrix expm_skew_hermitian(const Matrix& a);

/// ||M - M*||_F / max(1, ||M||_F).
double hermitian_defect(const Matrix& m);

} // namespace lgm
