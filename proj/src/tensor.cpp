#include "lgm/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "lgm/errors.hpp"

namespace lgm {

namespace {

std::size_t product(std::span<const std::size_t> extents)
{
    return std::accumulate(extents.begin(), extents.end(), std::size_t{1},
                           std::multiplies<>());
}

void check_shape(const std::vector<std::size_t>& shape)
{
    for (auto e : shape)
        if (e == 0)
            throw ShapeError("tensor extents must be positive");
}

// Advances a row-major multi-index; returns false after the last one.
bool next_index(std::vector<std::size_t>& idx, std::span<const std::size_t> extents)
{
    for (std::size_t k = idx.size(); k-- > 0;) {
        if (++idx[k] < extents[k])
            return true;
        idx[k] = 0;
    }
    return false;
}

} // namespace

std::vector<std::size_t> row_major_strides(std::span<const std::size_t> shape)
{
    std::vector<std::size_t> strides(shape.size(), 1);
    for (std::size_t k = shape.size(); k-- > 1;)
        strides[k - 1] = strides[k] * shape[k];
    return strides;
}

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape))
{
    check_shape(shape_);
    data_.assign(product(shape_), cplx{0.0, 0.0});
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<cplx> data)
    : shape_(std::move(shape)), data_(std::move(data))
{
    check_shape(shape_);
    if (data_.size() != product(shape_))
        throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                         " does not match product of extents " +
                         std::to_string(product(shape_)));
}

Tensor Tensor::scalar(cplx value) { return Tensor({}, {value}); }

Tensor Tensor::from_matrix(const Matrix& m)
{
    Tensor t({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            t.data_[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
    return t;
}

Tensor Tensor::identity(std::size_t n)
{
    Tensor t({n, n});
    for (std::size_t i = 0; i < n; ++i)
        t.data_[i * n + i] = 1.0;
    return t;
}

std::size_t Tensor::offset(std::span<const std::size_t> idx) const
{
    if (idx.size() != shape_.size())
        throw ShapeError("index rank " + std::to_string(idx.size()) +
                         " does not match tensor rank " + std::to_string(shape_.size()));
    std::size_t off = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] >= shape_[k])
            throw ShapeError("index " + std::to_string(idx[k]) + " out of range on axis " +
                             std::to_string(k) + " with extent " + std::to_string(shape_[k]));
        off = off * shape_[k] + idx[k];
    }
    return off;
}

cplx& Tensor::operator()(std::initializer_list<std::size_t> idx)
{
    return at(std::span<const std::size_t>(idx.begin(), idx.size()));
}

cplx Tensor::operator()(std::initializer_list<std::size_t> idx) const
{
    return at(std::span<const std::size_t>(idx.begin(), idx.size()));
}

Matrix Tensor::to_matrix() const
{
    if (rank() != 2)
        throw ShapeError("expected a rank-2 tensor, got rank " + std::to_string(rank()));
    Matrix m(static_cast<Eigen::Index>(shape_[0]), static_cast<Eigen::Index>(shape_[1]));
    for (std::size_t i = 0; i < shape_[0]; ++i)
        for (std::size_t j = 0; j < shape_[1]; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                data_[i * shape_[1] + j];
    return m;
}

Tensor Tensor::reshaped(std::vector<std::size_t> shape) const
{
    return Tensor(std::move(shape), data_);
}

bool Tensor::all_finite() const
{
    for (const auto& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            return false;
    return true;
}

double Tensor::frobenius_norm() const
{
    double s = 0.0;
    for (const auto& z : data_)
        s += std::norm(z);
    return std::sqrt(s);
}

Tensor& Tensor::operator+=(const Tensor& other)
{
    if (other.shape_ != shape_)
        throw ShapeError("tensor addition with mismatched shapes");
    for (std::size_t k = 0; k < data_.size(); ++k)
        data_[k] += other.data_[k];
    return *this;
}

Tensor& Tensor::operator*=(cplx s)
{
    for (auto& z : data_)
        z *= s;
    return *this;
}

Tensor operator-(Tensor a, const Tensor& b)
{
    a += cplx{-1.0, 0.0} * b;
    return a;
}

double max_abs_diff(const Tensor& a, const Tensor& b)
{
    if (a.shape() != b.shape())
        throw ShapeError("max_abs_diff with mismatched shapes");
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

Tensor contract(const Tensor& a, const Tensor& b,
                std::span<const std::pair<std::size_t, std::size_t>> pairs)
{
    std::vector<bool> a_paired(a.rank(), false), b_paired(b.rank(), false);
    std::vector<std::size_t> pair_extents;
    for (auto [ia, ib] : pairs) {
        if (ia >= a.rank() || ib >= b.rank())
            throw ShapeError("contraction axis out of range");
        if (a_paired[ia] || b_paired[ib])
            throw ShapeError("contraction axis paired more than once");
        if (a.shape()[ia] != b.shape()[ib]) {
            std::ostringstream os;
            os << "contraction shape mismatch: axis " << ia << " of a has extent "
               << a.shape()[ia] << " but axis " << ib << " of b has extent " << b.shape()[ib];
            throw ShapeError(os.str());
        }
        a_paired[ia] = b_paired[ib] = true;
        pair_extents.push_back(a.shape()[ia]);
    }

    const auto sa = row_major_strides(a.shape());
    const auto sb = row_major_strides(b.shape());

    std::vector<std::size_t> out_shape, out_stride_a, out_stride_b;
    for (std::size_t k = 0; k < a.rank(); ++k)
        if (!a_paired[k]) {
            out_shape.push_back(a.shape()[k]);
            out_stride_a.push_back(sa[k]);
            out_stride_b.push_back(0);
        }
    for (std::size_t k = 0; k < b.rank(); ++k)
        if (!b_paired[k]) {
            out_shape.push_back(b.shape()[k]);
            out_stride_a.push_back(0);
            out_stride_b.push_back(sb[k]);
        }

    std::vector<std::size_t> pair_stride_a, pair_stride_b;
    for (auto [ia, ib] : pairs) {
        pair_stride_a.push_back(sa[ia]);
        pair_stride_b.push_back(sb[ib]);
    }

    Tensor out(out_shape);
    std::vector<std::size_t> oidx(out_shape.size(), 0);
    std::size_t flat = 0;
    do {
        std::size_t base_a = 0, base_b = 0;
        for (std::size_t k = 0; k < oidx.size(); ++k) {
            base_a += oidx[k] * out_stride_a[k];
            base_b += oidx[k] * out_stride_b[k];
        }
        cplx acc{0.0, 0.0};
        std::vector<std::size_t> pidx(pair_extents.size(), 0);
        do {
            std::size_t oa = base_a, ob = base_b;
            for (std::size_t k = 0; k < pidx.size(); ++k) {
                oa += pidx[k] * pair_stride_a[k];
                ob += pidx[k] * pair_stride_b[k];
            }
            acc += a.data()[oa] * b.data()[ob];
        } while (next_index(pidx, pair_extents));
        out.data()[flat++] = acc;
    } while (next_index(oidx, out_shape));
    return out;
}

Tensor contract(const Tensor& a, const Tensor& b,
                std::initializer_list<std::pair<std::size_t, std::size_t>> pairs)
{
    return contract(a, b, std::span<const std::pair<std::size_t, std::size_t>>(
                              pairs.begin(), pairs.size()));
}

} // namespace lgm
