#pragma once

#include "pixad/exec.hpp"
#include "pixad/tensor.hpp"

namespace pixad {

struct WindowConfig {
    i64 k = 3;  // odd window size

    void validate() const {
        PIXAD_CHECK(k >= 1, "window size k must be >= 1");
        PIXAD_CHECK(k % 2 == 1, "window size k must be odd");
    }
    i64 pad() const { return k / 2; }
};

// im2col over k x k zero-padded windows -> [b, c*k*k, n].
template <typename T>
UnfoldedMapT<T> unfold(const FeatureMapT<T>& f, const WindowConfig& cfg);

// Sub-pixel rearrangement, out[b, c/r^2, h*r, w*r]:
// out[bi][cc][y*r+dy][x*r+dx] = in[bi][cc*r*r + dy*r + dx][y][x].
template <typename T>
FeatureMapT<T> pixel_shuffle(const FeatureMapT<T>& f, i64 r);
template <typename T>
FeatureMapT<T> pixel_unshuffle(const FeatureMapT<T>& f, i64 r);

// Per-pixel matvec + bias; reduction over input channels ascending.
template <typename T>
FeatureMapT<T> pointwise_linear(const FeatureMapT<T>& f, const LinearWeightsT<T>& wts,
                                const ExecOptions& opts = {});

// Numerically-stable softmax along the last (w) axis of a rank-4 map.
template <typename T>
FeatureMapT<T> softmax_lastdim(const FeatureMapT<T>& f);

extern template UnfoldedMapT<float> unfold<float>(const FeatureMapT<float>&, const WindowConfig&);
extern template UnfoldedMapT<double> unfold<double>(const FeatureMapT<double>&, const WindowConfig&);
extern template FeatureMapT<float> pixel_shuffle<float>(const FeatureMapT<float>&, i64);
extern template FeatureMapT<double> pixel_shuffle<double>(const FeatureMapT<double>&, i64);
extern template FeatureMapT<float> pixel_unshuffle<float>(const FeatureMapT<float>&, i64);
extern template FeatureMapT<double> pixel_unshuffle<double>(const FeatureMapT<double>&, i64);
extern template FeatureMapT<float> pointwise_linear<float>(const FeatureMapT<float>&,
                                                           const LinearWeightsT<float>&,
                                                           const ExecOptions&);
extern template FeatureMapT<double> pointwise_linear<double>(const FeatureMapT<double>&,
                                                             const LinearWeightsT<double>&,
                                                             const ExecOptions&);
extern template FeatureMapT<float> softmax_lastdim<float>(const FeatureMapT<float>&);
extern template FeatureMapT<double> softmax_lastdim<double>(const FeatureMapT<double>&);

}  // namespace pixad
