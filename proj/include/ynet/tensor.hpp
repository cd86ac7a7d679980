#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

#include "ynet/errors.hpp"

namespace ynet {

using Shape = std::vector<std::size_t>;

std::string shape_str(const Shape& s);

// Dense N-D array of f64 in row-major order (innermost dimension varies
// fastest). Rank 0 is a scalar holding one element. All dimension sizes
// are >= 1 and product(shape) always equals the number of elements.
class Tensor {
public:
    // Rank-0 scalar, value 0.
    Tensor() : data_(1, 0.0) {}

    // Zero-filled tensor of the given shape.
    explicit Tensor(Shape shape);

    // Takes ownership of data; length must equal product(shape).
    Tensor(Shape shape, std::vector<double> data);

    static Tensor scalar(double v);
    static Tensor full(Shape shape, double v);
    static Tensor zeros(Shape shape) { return Tensor(std::move(shape)); }
    static Tensor ones(Shape shape) { return full(std::move(shape), 1.0); }

    const Shape& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }
    std::size_t dim(std::size_t axis) const { return shape_[axis]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& vec() { return data_; }
    const std::vector<double>& vec() const { return data_; }

    double operator[](std::size_t flat) const { return data_[flat]; }
    double& operator[](std::size_t flat) { return data_[flat]; }

    // Row-major flat index of a multi-index.
    std::size_t index(std::initializer_list<std::size_t> idx) const;
    double at(std::initializer_list<std::size_t> idx) const { return data_[index(idx)]; }
    double& at(std::initializer_list<std::size_t> idx) { return data_[index(idx)]; }

    // Strides in elements; stride[k] = product of dims after k.
    std::vector<std::size_t> strides() const;

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }
    bool all_finite() const;

    // Reinterprets the buffer under a new shape with equal element count.
    Tensor reshaped(Shape new_shape) const;

private:
    Shape shape_;
    std::vector<double> data_;
};

enum class EwOp { add, sub, mul, div, max };

// Elementwise combine. b must have a's shape or be right-align
// broadcastable to it (each aligned dimension equal or 1). Division
// throws NumericError if any used divisor is exactly zero.
Tensor elementwise(EwOp op, const Tensor& a, const Tensor& b);

inline Tensor add(const Tensor& a, const Tensor& b) { return elementwise(EwOp::add, a, b); }
inline Tensor sub(const Tensor& a, const Tensor& b) { return elementwise(EwOp::sub, a, b); }
inline Tensor mul(const Tensor& a, const Tensor& b) { return elementwise(EwOp::mul, a, b); }
inline Tensor div(const Tensor& a, const Tensor& b) { return elementwise(EwOp::div, a, b); }
inline Tensor maximum(const Tensor& a, const Tensor& b) { return elementwise(EwOp::max, a, b); }

// In-place scalar helpers used by the optimizer and kernels.
Tensor scale(const Tensor& a, double s);
void axpy(Tensor& y, double alpha, const Tensor& x);  // y += alpha * x

enum class ReduceOp { sum, mean, max };

// Reduce over the given axes (deduplicated). Reduced axes are removed,
// or kept as size 1 when keepdims is set. Fixed row-major accumulation
// order, so results are bitwise reproducible.
Tensor reduce(ReduceOp op, const Tensor& a, const std::vector<std::size_t>& axes,
              bool keepdims = false);

Tensor reduce_all(ReduceOp op, const Tensor& a);  // scalar result

// Standard matrix product of rank-2 tensors [m x k] * [k x n].
Tensor matmul(const Tensor& a, const Tensor& b);

// "YTF" binary tensor format:
//   magic "YTF1" | rank u32 LE | shape rank x u64 LE | payload f64 LE row-major
// No padding, no compression. Round trips are bit-exact.
void write_ytf(std::ostream& os, const Tensor& t);
Tensor read_ytf(std::istream& is);
void write_ytf(const std::filesystem::path& path, const Tensor& t);
Tensor read_ytf(const std::filesystem::path& path);

}  // namespace ynet
