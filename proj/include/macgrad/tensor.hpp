#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "macgrad/errors.hpp"

namespace macgrad {

using Shape = std::vector<std::size_t>;

std::string shape_str(const Shape& shape);
std::size_t shape_numel(const Shape& shape);

// Dense row-major float64 array. Value semantics; copies are deep.
class Tensor {
public:
    Tensor() : shape_{0} {}  // empty vector
    explicit Tensor(Shape shape, double fill = 0.0);
    Tensor(Shape shape, std::vector<double> data);

    static Tensor zeros(Shape shape) { return Tensor(std::move(shape), 0.0); }
    static Tensor vector(std::vector<double> values);
    // Row-major literal: Tensor::matrix(2, 2, {1, 2, 3, 4}).
    static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
    static Tensor eye(std::size_t n);
    static Tensor diag(std::span<const double> values);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t dim(std::size_t axis) const;
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    // Rank-2 conveniences; throw DimensionError on other ranks.
    std::size_t rows() const;
    std::size_t cols() const;

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }
    const std::vector<double>& values() const noexcept { return data_; }
    double* ptr() noexcept { return data_.data(); }
    const double* ptr() const noexcept { return data_.data(); }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }

    std::span<double> row(std::size_t i);
    std::span<const double> row(std::size_t i) const;

    Tensor reshaped(Shape shape) const;
    void reshape(Shape shape);

    bool all_finite() const noexcept;

    friend bool operator==(const Tensor& a, const Tensor& b) = default;

private:
    Shape shape_;
    std::vector<double> data_;
};

std::ostream& operator<<(std::ostream& os, const Tensor& t);

void require_rank(const Tensor& t, std::size_t rank, const char* what);
void require_same_shape(const Tensor& a, const Tensor& b, const char* what);

// --- elementwise and structural ops -------------------------------------

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);  // Hadamard
Tensor scale(const Tensor& a, double s);
// a += s * b
void axpy(Tensor& a, double s, const Tensor& b);

Tensor outer(std::span<const double> u, std::span<const double> v);
Tensor transpose(const Tensor& a);

double dot(std::span<const double> a, std::span<const double> b);
double sum(const Tensor& a);
// Reductions over axis 0 or 1 of a rank-2 tensor.
Tensor sum_axis(const Tensor& a, std::size_t axis);
Tensor mean_axis(const Tensor& a, std::size_t axis);

double frobenius_norm(const Tensor& a);
double l2_norm(std::span<const double> v);
double max_abs(const Tensor& a);
double trace(const Tensor& a);

// y = A x for rank-2 A and vector x.
Tensor matvec(const Tensor& a, std::span<const double> x);
// y = A^T x
Tensor matvec_t(const Tensor& a, std::span<const double> x);

// Dense matrix product; dispatches to the parallel kernels.
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor matmul_tn(const Tensor& a, const Tensor& b);  // a^T b
Tensor matmul_nt(const Tensor& a, const Tensor& b);  // a b^T

// Kronecker product of two matrices.
Tensor kron(const Tensor& a, const Tensor& b);
// Column-stacking vec() and its inverse.
Tensor vec(const Tensor& a);
Tensor unvec(const Tensor& v, std::size_t rows, std::size_t cols);

// Append a constant-one column to a rank-2 tensor.
Tensor append_ones_column(const Tensor& a);

// --- convolution patches ---------------------------------------------------

struct ConvGeometry {
    std::size_t channels = 0, height = 0, width = 0;
    std::size_t kernel_h = 0, kernel_w = 0;
    std::size_t stride = 1, padding = 0;

    std::size_t out_h() const;
    std::size_t out_w() const;
    std::size_t patch_size() const { return channels * kernel_h * kernel_w; }
    void validate() const;
};

// x: [B, C, H, W] -> [B * out_h * out_w, C * kh * kw]; rows ordered (b, oy, ox).
Tensor im2col(const Tensor& x, const ConvGeometry& g);
// Adjoint of im2col: scatters-adds patch rows back to [B, C, H, W].
Tensor col2im(const Tensor& cols, std::size_t batch, const ConvGeometry& g);

// --- binary serialization ----------------------------------------------------
// Little-endian: u32 rank, u64 extents..., then raw float64 payload.

void write_tensor(std::ostream& os, const Tensor& t);
Tensor read_tensor(std::istream& is);
std::vector<std::uint8_t> encode_tensor(const Tensor& t);
Tensor decode_tensor(std::span<const std::uint8_t> bytes);

}  // namespace macgrad
