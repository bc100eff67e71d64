#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hno {

using Complex = std::complex<double>;

// Dense row-major tensor with a fixed axis convention:
//   (batch, spatial_1, ..., spatial_d, channels)
// Rank is always >= 2 and channels are innermost, so a per-point channel
// vector is contiguous. Spatial axes are indexed 0..d-1 throughout the
// library; array axis = spatial axis + 1.
template <typename T>
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<std::size_t> shape)
        : shape_(std::move(shape)), data_(check_shape(shape_), T{}) {}

    Tensor(std::vector<std::size_t> shape, std::vector<T> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        if (check_shape(shape_) != data_.size())
            throw std::invalid_argument("Tensor: data length does not match shape");
    }

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t size() const { return data_.size(); }
    std::size_t batch() const { return shape_.front(); }
    std::size_t channels() const { return shape_.back(); }
    std::size_t spatial_rank() const { return shape_.size() - 2; }

    std::size_t extent(std::size_t array_axis) const { return shape_.at(array_axis); }

    std::size_t spatial_extent(std::size_t spatial_axis) const {
        if (spatial_axis >= spatial_rank())
            throw std::invalid_argument("Tensor: spatial axis " + std::to_string(spatial_axis) +
                                        " out of range");
        return shape_[spatial_axis + 1];
    }

    std::vector<std::size_t> spatial_shape() const {
        return {shape_.begin() + 1, shape_.end() - 1};
    }

    // Row-major stride of an array axis, in elements.
    std::size_t stride(std::size_t array_axis) const {
        std::size_t s = 1;
        for (std::size_t a = shape_.size(); a-- > array_axis + 1;) s *= shape_[a];
        return s;
    }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    std::vector<T>& raw() { return data_; }
    const std::vector<T>& raw() const { return data_; }
    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    bool all_finite() const {
        for (const T& v : data_)
            if (!finite_value(v)) return false;
        return true;
    }

private:
    static std::size_t check_shape(const std::vector<std::size_t>& shape) {
        if (shape.size() < 2)
            throw std::invalid_argument("Tensor: rank must be >= 2 (batch, spatial..., channels)");
        std::size_t n = 1;
        for (std::size_t e : shape) {
            if (e == 0) throw std::invalid_argument("Tensor: zero extent");
            n *= e;
        }
        return n;
    }

    static bool finite_value(double v) { return std::isfinite(v); }
    static bool finite_value(const Complex& v) {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    }

    std::vector<std::size_t> shape_;
    std::vector<T> data_;
};

using RealField = Tensor<double>;
using ComplexSpectrum = Tensor<Complex>;

inline std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t e : shape) n *= e;
    return n;
}

template <typename T>
Tensor<T> zeros_like(const Tensor<T>& t) {
    return Tensor<T>(t.shape());
}

inline void add_inplace(RealField& a, const RealField& b) {
    if (a.shape() != b.shape()) throw std::invalid_argument("add_inplace: shape mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

inline void scale_inplace(RealField& a, double s) {
    for (double& v : a.raw()) v *= s;
}

inline double linf_norm(const RealField& a) {
    double m = 0.0;
    for (double v : a.raw()) m = std::max(m, std::abs(v));
    return m;
}

inline double l2_norm(const RealField& a) {
    double s = 0.0;
    for (double v : a.raw()) s += v * v;
    return std::sqrt(s);
}

// Copies the listed samples (batch rows) into a new tensor, in order.
template <typename T>
Tensor<T> gather_samples(const Tensor<T>& src, const std::vector<std::size_t>& rows) {
    if (rows.empty()) throw std::invalid_argument("gather_samples: empty selection");
    auto shape = src.shape();
    const std::size_t row_len = src.size() / src.batch();
    shape.front() = rows.size();
    Tensor<T> out(shape);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r] >= src.batch()) throw std::invalid_argument("gather_samples: row out of range");
        const T* from = src.data() + rows[r] * row_len;
        std::copy(from, from + row_len, out.data() + r * row_len);
    }
    return out;
}

}  // namespace hno
