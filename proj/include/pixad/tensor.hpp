#pragma once

#include <cstring>
#include <iosfwd>
#include <vector>

#include "pixad/common.hpp"

namespace pixad {

// Dense feature map, row-major [b, c, h, w]. double for verification paths,
// float for the benchmark mode.
template <typename T>
struct FeatureMapT {
    i64 b = 0, c = 0, h = 0, w = 0;
    std::vector<T> data;

    FeatureMapT() = default;
    FeatureMapT(i64 b_, i64 c_, i64 h_, i64 w_) : b(b_), c(c_), h(h_), w(w_) {
        PIXAD_CHECK(b_ >= 1 && c_ >= 1 && h_ >= 1 && w_ >= 1,
                    "FeatureMap dims must all be >= 1");
        data.assign(static_cast<size_t>(b_ * c_ * h_ * w_), T(0));
    }

    i64 n() const { return h * w; }                 // pixels per image
    i64 size() const { return b * c * h * w; }
    size_t bytes() const { return data.size() * sizeof(T); }

    T& at(i64 bi, i64 ci, i64 y, i64 x) {
        return data[static_cast<size_t>(((bi * c + ci) * h + y) * w + x)];
    }
    T at(i64 bi, i64 ci, i64 y, i64 x) const {
        return data[static_cast<size_t>(((bi * c + ci) * h + y) * w + x)];
    }
    // Channel plane as a flat pixel row [n].
    T* plane(i64 bi, i64 ci) { return data.data() + (bi * c + ci) * h * w; }
    const T* plane(i64 bi, i64 ci) const { return data.data() + (bi * c + ci) * h * w; }

    // Equal dims + bit-for-bit equal payload.
    friend bool operator==(const FeatureMapT& a, const FeatureMapT& x) {
        if (a.b != x.b || a.c != x.c || a.h != x.h || a.w != x.w) return false;
        if (a.data.empty()) return true;
        return std::memcmp(a.data.data(), x.data.data(), a.bytes()) == 0;
    }
};

using FeatureMap = FeatureMapT<double>;

// Unfolded k x k windows: [b, c*k*k, n], zero padding p = k/2.
// Row (ci, wr, wc) lives at ci*k*k + wr*k + wc; column i is pixel y*w + x.
template <typename T>
struct UnfoldedMapT {
    i64 b = 0, c = 0, k = 0, n = 0;
    std::vector<T> data;

    i64 ckk() const { return c * k * k; }
    T* row(i64 bi, i64 r) { return data.data() + (bi * ckk() + r) * n; }
    const T* row(i64 bi, i64 r) const { return data.data() + (bi * ckk() + r) * n; }
};

using UnfoldedMap = UnfoldedMapT<double>;

// 1x1 (pointwise) linear transform: w is [c_out, c_in] row-major.
template <typename T>
struct LinearWeightsT {
    i64 c_out = 0, c_in = 0;
    std::vector<T> w;
    std::vector<T> bias;

    LinearWeightsT() = default;
    LinearWeightsT(i64 co, i64 ci) : c_out(co), c_in(ci) {
        PIXAD_CHECK(co >= 1 && ci >= 1, "LinearWeights dims must be >= 1");
        w.assign(static_cast<size_t>(co * ci), T(0));
        bias.assign(static_cast<size_t>(co), T(0));
    }

    T& at(i64 o, i64 i) { return w[static_cast<size_t>(o * c_in + i)]; }
    T at(i64 o, i64 i) const { return w[static_cast<size_t>(o * c_in + i)]; }
};

using LinearWeights = LinearWeightsT<double>;

// SplitMix64; 53-bit mantissa mapping to [0,1), then affine to [-1,1).
// Same seed => same sequence, forever.
class SeededRng {
public:
    explicit SeededRng(u64 seed) : state_(seed) {}

    u64 next_u64() {
        u64 z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double next_unit() {  // [0, 1)
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }
    double next_symmetric() {  // [-1, 1)
        return 2.0 * next_unit() - 1.0;
    }
    // Uniform integer in [0, m), m >= 1. Rejection-free 128-bit scaling.
    u64 next_below(u64 m) {
        return static_cast<u64>((static_cast<unsigned __int128>(next_u64()) * m) >> 64);
    }

    template <typename T>
    void fill(FeatureMapT<T>& f) {
        for (auto& v : f.data) v = static_cast<T>(next_symmetric());
    }
    template <typename T>
    void fill(LinearWeightsT<T>& l, bool with_bias = false) {
        for (auto& v : l.w) v = static_cast<T>(next_symmetric());
        if (with_bias)
            for (auto& v : l.bias) v = static_cast<T>(next_symmetric());
    }

private:
    u64 state_;
};

template <typename T>
FeatureMapT<T> random_map(u64 seed, i64 b, i64 c, i64 h, i64 w) {
    FeatureMapT<T> f(b, c, h, w);
    SeededRng rng(seed);
    rng.fill(f);
    return f;
}

// Flat little-endian dump: four u64 dims then b*c*h*w doubles.
void dump(const FeatureMap& f, std::ostream& os);
FeatureMap load_feature_map(std::istream& is);

}  // namespace pixad
