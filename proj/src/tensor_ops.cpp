#include "pixad/tensor_ops.hpp"

#include <algorithm>
#include <cmath>

#include "pixad/kernels.hpp"

namespace pixad {

template <typename T>
UnfoldedMapT<T> unfold(const FeatureMapT<T>& f, const WindowConfig& cfg) {
    cfg.validate();
    const i64 k = cfg.k, p = cfg.pad();
    PIXAD_CHECK(k <= 2 * std::min(f.h, f.w) + 1,
                "window would exceed the zero-padded image");
    UnfoldedMapT<T> u;
    u.b = f.b;
    u.c = f.c;
    u.k = k;
    u.n = f.n();
    u.data.assign(static_cast<size_t>(f.b * f.c * k * k * u.n), T(0));

    for (i64 bi = 0; bi < f.b; ++bi)
        for (i64 ci = 0; ci < f.c; ++ci) {
            const T* src = f.plane(bi, ci);
            for (i64 wr = 0; wr < k; ++wr)
                for (i64 wc = 0; wc < k; ++wc) {
                    const i64 dy = wr - p, dx = wc - p;
                    T* dst = u.row(bi, ci * k * k + wr * k + wc);
                    const i64 x0 = std::max<i64>(0, -dx);
                    const i64 x1 = std::min<i64>(f.w, f.w - dx);
                    if (x0 >= x1) continue;
                    for (i64 y = 0; y < f.h; ++y) {
                        const i64 sy = y + dy;
                        if (sy < 0 || sy >= f.h) continue;
                        std::copy(src + sy * f.w + x0 + dx, src + sy * f.w + x1 + dx,
                                  dst + y * f.w + x0);
                    }
                }
        }
    return u;
}

template <typename T>
FeatureMapT<T> pixel_shuffle(const FeatureMapT<T>& f, i64 r) {
    PIXAD_CHECK(r >= 1, "upscale factor must be >= 1");
    PIXAD_CHECK(f.c % (r * r) == 0, "channel count not divisible by r^2");
    FeatureMapT<T> out(f.b, f.c / (r * r), f.h * r, f.w * r);
    for (i64 bi = 0; bi < f.b; ++bi)
        for (i64 cc = 0; cc < out.c; ++cc)
            for (i64 y = 0; y < f.h; ++y)
                for (i64 x = 0; x < f.w; ++x)
                    for (i64 dy = 0; dy < r; ++dy)
                        for (i64 dx = 0; dx < r; ++dx)
                            out.at(bi, cc, y * r + dy, x * r + dx) =
                                f.at(bi, cc * r * r + dy * r + dx, y, x);
    return out;
}

template <typename T>
FeatureMapT<T> pixel_unshuffle(const FeatureMapT<T>& f, i64 r) {
    PIXAD_CHECK(r >= 1, "downscale factor must be >= 1");
    PIXAD_CHECK(f.h % r == 0 && f.w % r == 0, "spatial dims not divisible by r");
    FeatureMapT<T> out(f.b, f.c * r * r, f.h / r, f.w / r);
    for (i64 bi = 0; bi < f.b; ++bi)
        for (i64 cc = 0; cc < f.c; ++cc)
            for (i64 y = 0; y < out.h; ++y)
                for (i64 x = 0; x < out.w; ++x)
                    for (i64 dy = 0; dy < r; ++dy)
                        for (i64 dx = 0; dx < r; ++dx)
                            out.at(bi, cc * r * r + dy * r + dx, y, x) =
                                f.at(bi, cc, y * r + dy, x * r + dx);
    return out;
}

template <typename T>
FeatureMapT<T> pointwise_linear(const FeatureMapT<T>& f, const LinearWeightsT<T>& wts,
                                const ExecOptions& opts) {
    PIXAD_CHECK(wts.c_in == f.c, "pointwise_linear channel mismatch");
    const Isa isa = resolve_isa(opts.isa);
    const auto& k = kern::kernels<T>(isa);
    FeatureMapT<T> out(f.b, wts.c_out, f.h, f.w);
    const i64 n = f.n();
    // One output plane per task; the c_in reduction stays serial and ascending.
    parallel_for(f.b * wts.c_out, opts.threads, [&](i64 begin, i64 end) {
        for (i64 task = begin; task < end; ++task) {
            const i64 bi = task / wts.c_out;
            const i64 o = task % wts.c_out;
            T* dst = out.plane(bi, o);
            std::fill(dst, dst + n, wts.bias[static_cast<size_t>(o)]);
            for (i64 ci = 0; ci < f.c; ++ci)
                k.acc_scal(dst, wts.at(o, ci), f.plane(bi, ci), n);
        }
    });
    return out;
}

template <typename T>
FeatureMapT<T> softmax_lastdim(const FeatureMapT<T>& f) {
    FeatureMapT<T> out = f;
    const i64 rows = f.b * f.c * f.h;
    for (i64 r = 0; r < rows; ++r) {
        T* row = out.data.data() + r * f.w;
        T m = row[0];
        for (i64 x = 1; x < f.w; ++x) m = m < row[x] ? row[x] : m;
        T sum = T(0);
        for (i64 x = 0; x < f.w; ++x) {
            row[x] = std::exp(row[x] - m);
            sum += row[x];
        }
        for (i64 x = 0; x < f.w; ++x) row[x] /= sum;
    }
    return out;
}

template UnfoldedMapT<float> unfold<float>(const FeatureMapT<float>&, const WindowConfig&);
template UnfoldedMapT<double> unfold<double>(const FeatureMapT<double>&, const WindowConfig&);
template FeatureMapT<float> pixel_shuffle<float>(const FeatureMapT<float>&, i64);
template FeatureMapT<double> pixel_shuffle<double>(const FeatureMapT<double>&, i64);
template FeatureMapT<float> pixel_unshuffle<float>(const FeatureMapT<float>&, i64);
template FeatureMapT<double> pixel_unshuffle<double>(const FeatureMapT<double>&, i64);
template FeatureMapT<float> pointwise_linear<float>(const FeatureMapT<float>&,
                                                    const LinearWeightsT<float>&,
                                                    const ExecOptions&);
template FeatureMapT<double> pointwise_linear<double>(const FeatureMapT<double>&,
                                                      const LinearWeightsT<double>&,
                                                      const ExecOptions&);
template FeatureMapT<float> softmax_lastdim<float>(const FeatureMapT<float>&);
template FeatureMapT<double> softmax_lastdim<double>(const FeatureMapT<double>&);

}  // namespace pixad
