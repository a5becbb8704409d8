#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lgm {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dense complex multi-index array, row-major (last index fastest).
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape);
    Tensor(std::vector<std::size_t> shape, std::vector<cplx> data);

    static Tensor scalar(cplx value);
    static Tensor from_matrix(const Matrix& m);
    /// Identity matrix as a rank-2 tensor.
    static Tensor identity(std::size_t n);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }
    std::span<const cplx> data() const { return data_; }
    std::span<cplx> data() { return data_; }

    /// Row-major linear offset of a multi-index.
    std::size_t offset(std::span<const std::size_t> idx) const;
    cplx& at(std::span<const std::size_t> idx) { return data_[offset(idx)]; }
    cplx at(std::span<const std::size_t> idx) const { return data_[offset(idx)]; }
    cplx& operator()(std::initializer_list<std::size_t> idx);
    cplx operator()(std::initializer_list<std::size_t> idx) const;

    bool is_square_matrix() const { return rank() == 2 && shape_[0] == shape_[1]; }
    /// Requires rank 2.
    Matrix to_matrix() const;
    /// Reinterprets the data under a new shape with the same element count.
    Tensor reshaped(std::vector<std::size_t> shape) const;

    bool all_finite() const;
    double frobenius_norm() const;

    Tensor& operator+=(const Tensor& other);
    Tensor& operator*=(cplx s);
    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor& b);
    friend Tensor operator*(cplx s, Tensor a) { return a *= s; }

private:
    std::vector<std::size_t> shape_;
    std::vector<cplx> data_;
};

/// Maximum absolute elementwise difference; shapes must agree.
double max_abs_diff(const Tensor& a, const Tensor& b);

/// Sums over the paired axes. Result axes are the unpaired axes of `a` in
/// order, followed by the unpaired axes of `b`. Paired indices are summed in
/// lexicographic order (first pair slowest), so the result is deterministic.
Tensor contract(const Tensor& a, const Tensor& b,
                std::span<const std::pair<std::size_t, std::size_t>> pairs);
Tensor contract(const Tensor& a, const Tensor& b,
                std::initializer_list<std::pair<std::size_t, std::size_t>> pairs);

/// Row-major extents -> strides.
std::vector<std::size_t> row_major_strides(std::span<const std::size_t> shape);

} // namespace lgm
