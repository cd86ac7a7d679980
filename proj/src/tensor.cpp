#include "ynet/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace ynet {

namespace {

std::size_t checked_product(const Shape& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) {
        if (d == 0) throw Error("tensor: zero dimension in shape " + shape_str(shape));
        if (d > std::numeric_limits<std::size_t>::max() / n)
            throw Error("tensor: shape overflow " + shape_str(shape));
        n *= d;
    }
    return n;
}

}  // namespace

std::string shape_str(const Shape& s) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) os << ',';
        os << s[i];
    }
    os << ']';
    return os.str();
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)) {
    data_.assign(checked_product(shape_), 0.0);
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (checked_product(shape_) != data_.size())
        throw Error("tensor: shape " + shape_str(shape_) + " expects " +
                    std::to_string(checked_product(shape_)) + " elements, got " +
                    std::to_string(data_.size()));
}

Tensor Tensor::scalar(double v) {
    Tensor t;
    t.data_[0] = v;
    return t;
}

Tensor Tensor::full(Shape shape, double v) {
    Tensor t(std::move(shape));
    std::fill(t.data_.begin(), t.data_.end(), v);
    return t;
}

std::size_t Tensor::index(std::initializer_list<std::size_t> idx) const {
    if (idx.size() != shape_.size())
        throw Error("tensor: rank-" + std::to_string(shape_.size()) +
                    " index expected, got " + std::to_string(idx.size()));
    std::size_t flat = 0;
    std::size_t axis = 0;
    for (std::size_t i : idx) {
        if (i >= shape_[axis])
            throw Error("tensor: index " + std::to_string(i) + " out of range for axis " +
                        std::to_string(axis) + " of shape " + shape_str(shape_));
        flat = flat * shape_[axis] + i;
        ++axis;
    }
    return flat;
}

std::vector<std::size_t> Tensor::strides() const {
    std::vector<std::size_t> s(shape_.size(), 1);
    for (std::size_t k = shape_.size(); k-- > 1;) s[k - 1] = s[k] * shape_[k];
    return s;
}

bool Tensor::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Tensor Tensor::reshaped(Shape new_shape) const {
    if (checked_product(new_shape) != data_.size())
        throw Error("tensor: cannot reshape " + shape_str(shape_) + " to " +
                    shape_str(new_shape));
    return Tensor(std::move(new_shape), data_);
}

namespace {

double apply(EwOp op, double x, double y) {
    switch (op) {
        case EwOp::add: return x + y;
        case EwOp::sub: return x - y;
        case EwOp::mul: return x * y;
        case EwOp::div: return x / y;
        case EwOp::max: return x > y ? x : y;
    }
    return 0.0;  // unreachable
}

}  // namespace

Tensor elementwise(EwOp op, const Tensor& a, const Tensor& b) {
    const Shape& as = a.shape();
    const Shape& bs = b.shape();

    if (bs.size() > as.size())
        throw Error("elementwise: shape mismatch " + shape_str(as) + " vs " + shape_str(bs));

    // Right-aligned broadcast: stride 0 on axes where b has extent 1 or is absent.
    std::size_t offset = as.size() - bs.size();
    std::vector<std::size_t> bstride(as.size(), 0);
    {
        auto bst = b.strides();
        for (std::size_t i = 0; i < bs.size(); ++i) {
            std::size_t ai = offset + i;
            if (bs[i] == as[ai])
                bstride[ai] = bst[i];
            else if (bs[i] != 1)
                throw Error("elementwise: shape mismatch " + shape_str(as) + " vs " +
                            shape_str(bs));
        }
    }

    Tensor out(as);
    double* o = out.data();
    const double* pa = a.data();
    const double* pb = b.data();
    const std::size_t n = a.size();

    if (as == bs) {  // fast path, no odometer
        if (op == EwOp::div)
            for (std::size_t i = 0; i < n; ++i)
                if (pb[i] == 0.0)
                    throw NumericError("elementwise div: divisor is exactly 0 at flat index " +
                                       std::to_string(i));
        for (std::size_t i = 0; i < n; ++i) o[i] = apply(op, pa[i], pb[i]);
        return out;
    }

    std::vector<std::size_t> idx(as.size(), 0);
    std::size_t bflat = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (op == EwOp::div && pb[bflat] == 0.0)
            throw NumericError("elementwise div: divisor is exactly 0 at flat index " +
                               std::to_string(bflat));
        o[i] = apply(op, pa[i], pb[bflat]);
        // advance odometer
        for (std::size_t ax = as.size(); ax-- > 0;) {
            bflat += bstride[ax];
            if (++idx[ax] < as[ax]) break;
            bflat -= bstride[ax] * as[ax];
            idx[ax] = 0;
        }
    }
    return out;
}

Tensor scale(const Tensor& a, double s) {
    Tensor out = a;
    for (double& v : out.vec()) v *= s;
    return out;
}

void axpy(Tensor& y, double alpha, const Tensor& x) {
    if (!y.same_shape(x))
        throw Error("axpy: shape mismatch " + shape_str(y.shape()) + " vs " +
                    shape_str(x.shape()));
    double* py = y.data();
    const double* px = x.data();
    for (std::size_t i = 0; i < y.size(); ++i) py[i] += alpha * px[i];
}

Tensor reduce(ReduceOp op, const Tensor& a, const std::vector<std::size_t>& axes,
              bool keepdims) {
    const Shape& as = a.shape();
    std::vector<bool> reduced(as.size(), false);
    for (std::size_t ax : axes) {
        if (ax >= as.size())
            throw Error("reduce: axis " + std::to_string(ax) + " invalid for shape " +
                        shape_str(as));
        reduced[ax] = true;
    }

    Shape out_shape;
    std::size_t count = 1;
    for (std::size_t i = 0; i < as.size(); ++i) {
        if (reduced[i]) {
            count *= as[i];
            if (keepdims) out_shape.push_back(1);
        } else {
            out_shape.push_back(as[i]);
        }
    }

    Tensor out = (op == ReduceOp::max)
                     ? Tensor::full(out_shape, -std::numeric_limits<double>::infinity())
                     : Tensor::zeros(out_shape);

    // Map each input element to its output slot; row-major scan keeps the
    // accumulation order fixed.
    std::vector<std::size_t> idx(as.size(), 0);
    std::vector<std::size_t> ostride(as.size(), 0);
    {
        auto os = out.strides();
        std::size_t k = 0;
        for (std::size_t i = 0; i < as.size(); ++i) {
            if (reduced[i]) {
                if (keepdims) ++k;
                continue;
            }
            ostride[i] = os[k++];
        }
    }

    double* o = out.data();
    const double* pa = a.data();
    std::size_t oflat = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (op == ReduceOp::max) {
            if (pa[i] > o[oflat]) o[oflat] = pa[i];
        } else {
            o[oflat] += pa[i];
        }
        for (std::size_t ax = as.size(); ax-- > 0;) {
            oflat += ostride[ax];
            if (++idx[ax] < as[ax]) break;
            oflat -= ostride[ax] * as[ax];
            idx[ax] = 0;
        }
    }

    if (op == ReduceOp::mean)
        for (double& v : out.vec()) v /= static_cast<double>(count);
    return out;
}

Tensor reduce_all(ReduceOp op, const Tensor& a) {
    std::vector<std::size_t> axes(a.rank());
    for (std::size_t i = 0; i < axes.size(); ++i) axes[i] = i;
    return reduce(op, a, axes, false);
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2)
        throw Error("matmul: rank-2 tensors required, got " + shape_str(a.shape()) +
                    " and " + shape_str(b.shape()));
    const std::size_t m = a.dim(0), k = a.dim(1), k2 = b.dim(0), n = b.dim(1);
    if (k != k2)
        throw Error("matmul: inner dimensions disagree, " + shape_str(a.shape()) +
                    " vs " + shape_str(b.shape()));

    Tensor out({m, n});
    const double* pa = a.data();
    const double* pb = b.data();
    double* o = out.data();
    for (std::size_t i = 0; i < m; ++i) {
        double* orow = o + i * n;
        for (std::size_t l = 0; l < k; ++l) {
            const double av = pa[i * k + l];
            const double* brow = pb + l * n;
            for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
        }
    }
    return out;
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& is, const char* what) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw IoError(std::string("ytf: truncated ") + what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& is, const char* what) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8))
        throw IoError(std::string("ytf: truncated ") + what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

constexpr std::uint32_t kMaxRank = 64;

}  // namespace

void write_ytf(std::ostream& os, const Tensor& t) {
    os.write("YTF1", 4);
    put_u32(os, static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) put_u64(os, static_cast<std::uint64_t>(d));
    for (std::size_t i = 0; i < t.size(); ++i)
        put_u64(os, std::bit_cast<std::uint64_t>(t[i]));
    if (!os) throw IoError("ytf: write failed");
}

Tensor read_ytf(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::string_view(magic, 4) != "YTF1")
        throw IoError("ytf: bad magic, not a YTF1 file");
    std::uint32_t rank = get_u32(is, "rank");
    if (rank > kMaxRank)
        throw IoError("ytf: rank " + std::to_string(rank) + " exceeds limit " +
                      std::to_string(kMaxRank));
    Shape shape(rank);
    std::size_t n = 1;
    for (std::uint32_t i = 0; i < rank; ++i) {
        std::uint64_t d = get_u64(is, "shape");
        if (d == 0) throw IoError("ytf: zero dimension in header");
        if (d > std::numeric_limits<std::size_t>::max() / n)
            throw IoError("ytf: shape product overflow");
        shape[i] = static_cast<std::size_t>(d);
        n *= shape[i];
    }
    std::vector<double> data(n);
    for (std::size_t i = 0; i < n; ++i)
        data[i] = std::bit_cast<double>(get_u64(is, "payload"));
    return Tensor(std::move(shape), std::move(data));
}

void write_ytf(const std::filesystem::path& path, const Tensor& t) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("ytf: cannot open for write: " + path.string());
    write_ytf(os, t);
    if (!os.flush()) throw IoError("ytf: write failed: " + path.string());
}

Tensor read_ytf(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("ytf: cannot open: " + path.string());
    return read_ytf(is);
}

}  // namespace ynet
