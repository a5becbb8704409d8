#include "lgm/linalg.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "lgm/errors.hpp"

namespace lgm {

namespace {

void require_square(const Matrix& m, const char* what)
{
    if (m.rows() != m.cols())
        throw ShapeError(std::string(what) + ": expected a square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

bool is_real(const Matrix& m)
{
    return m.imag().cwiseAbs().maxCoeff() == 0.0;
}

} // namespace

double hermitian_defect(const Matrix& m)
{
    require_square(m, "hermitian_defect");
    return (m - m.adjoint()).norm() / std::max(1.0, m.norm());
}

HermitianEig eig_hermitian(const Matrix& m)
{
    require_square(m, "eig_hermitian");
    if (m.size() == 0)
        return {};
    const Matrix sym = 0.5 * (m + m.adjoint());
    HermitianEig out;
    // Real symmetric input goes through the real solver; same result, less work.
    if (is_real(sym)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym.real());
        out.eigenvalues = es.eigenvalues();
        out.eigenvectors = es.eigenvectors().cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
        out.eigenvalues = es.eigenvalues();
        out.eigenvectors = es.eigenvectors();
    }
    return out;
}

HermitianEig eig_hermitian(const Tensor& m) { return eig_hermitian(m.to_matrix()); }

Matrix pseudoinverse(const Matrix& m, double rel_cutoff)
{
    require_square(m, "pseudoinverse");
    if (!(rel_cutoff > 0.0 && rel_cutoff < 1.0))
        throw DomainError("pseudoinverse: rel_cutoff must lie in (0,1)");
    const auto eig = eig_hermitian(m);
    const double top = eig.eigenvalues.size() ? eig.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(eig.eigenvalues.size());
    for (Eigen::Index k = 0; k < inv.size(); ++k) {
        const double l = eig.eigenvalues(k);
        if (top > 0.0 && std::abs(l) >= rel_cutoff * top)
            inv(k) = 1.0 / l;
    }
    return eig.eigenvectors * inv.cast<cplx>().asDiagonal() * eig.eigenvectors.adjoint();
}

Tensor pseudoinverse(const Tensor& m, double rel_cutoff)
{
    return Tensor::from_matrix(pseudoinverse(m.to_matrix(), rel_cutoff));
}

Matrix expm_skew_hermitian(const Matrix& a)
{
    // i*A is Hermitian; exp(A) = U exp(-i diag) U*.
    const auto eig = eig_hermitian(Matrix(cplx{0.0, 1.0} * a));
    Vector phases(eig.eigenvalues.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k)
        phases(k) = std::exp(cplx{0.0, -eig.eigenvalues(k)});
    return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

Matrix expm(const Matrix& m)
{
    require_square(m, "expm");
    if (m.size() == 0)
        return m;
    const double scale = std::max(1.0, m.norm());
    constexpr double tol = 1e-13;
    if ((m - m.adjoint()).norm() <= tol * scale) {
        const auto eig = eig_hermitian(m);
        Eigen::VectorXd e = eig.eigenvalues.array().exp();
        return eig.eigenvectors * e.cast<cplx>().asDiagonal() * eig.eigenvectors.adjoint();
    }
    if ((m + m.adjoint()).norm() <= tol * scale)
        return expm_skew_hermitian(0.5 * (m - m.adjoint()));
    return m.exp();
}

Tensor expm(const Tensor& m) { return Tensor::from_matrix(expm(m.to_matrix())); }

} // namespace lgm
