#ifndef SGGAN_TENSOR_HPP
#define SGGAN_TENSOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sggan {

// Dense channels-major (c,h,w) array of doubles. Vectors are stored as
// (n,1,1). All network activations, parameters and gradients use this type.
struct Tensor {
    int c = 0, h = 0, w = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(int c_, int h_, int w_)
        : c(c_), h(h_), w(w_), data(std::size_t(c_) * h_ * w_, 0.0) {}

    static Tensor vec(int n) { return Tensor(n, 1, 1); }

    std::size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }

    double& at(int ci, int yi, int xi) {
        return data[(std::size_t(ci) * h + yi) * w + xi];
    }
    double at(int ci, int yi, int xi) const {
        return data[(std::size_t(ci) * h + yi) * w + xi];
    }

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    bool same_shape(const Tensor& o) const {
        return c == o.c && h == o.h && w == o.w;
    }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }
    void zero() { fill(0.0); }

    std::string shape_str() const {
        return std::to_string(c) + "x" + std::to_string(h) + "x" + std::to_string(w);
    }
};

struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
    if (!a.same_shape(b))
        throw ShapeError(std::string(what) + ": shape mismatch " + a.shape_str() +
                         " vs " + b.shape_str());
}

// dst += s * src
inline void add_scaled(Tensor& dst, const Tensor& src, double s) {
    require_same_shape(dst, src, "add_scaled");
    for (std::size_t i = 0; i < dst.size(); ++i) dst.data[i] += s * src.data[i];
}

inline double max_abs(const Tensor& t) {
    double m = 0.0;
    for (double v : t.data) m = std::max(m, std::abs(v));
    return m;
}

inline double sum(const Tensor& t) {
    double s = 0.0;
    for (double v : t.data) s += v;
    return s;
}

inline bool all_finite(const Tensor& t) {
    for (double v : t.data)
        if (!std::isfinite(v)) return false;
    return true;
}

// FNV-1a over the raw bytes; used to assert parameters did or did not change.
inline std::uint64_t bytes_checksum(const Tensor& t) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const unsigned char* p = reinterpret_cast<const unsigned char*>(t.data.data());
    for (std::size_t i = 0; i < t.size() * sizeof(double); ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}

#endif
