#include "pixad/attention.hpp"

#include <algorithm>
#include <cmath>

#include "pixad/kernels.hpp"

namespace pixad {
namespace {

template <typename T>
void check_pam_inputs(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                      const WindowConfig& cfg) {
    wts.validate(f.c);
    cfg.validate();
    PIXAD_CHECK(cfg.k <= 2 * std::min(f.h, f.w) + 1,
                "window would exceed the zero-padded image");
}

inline i64 effective_workers(int threads, i64 tasks) {
    i64 t = threads < 1 ? 1 : threads;
    return std::min<i64>(t, tasks < 1 ? 1 : tasks);
}

// Fused sliding-window forward. att is the [b, k2, n] slot-major buffer
// (zero-filled by the caller); out is zero-filled. Every output element is
// owned by exactly one row task and every reduction runs in a fixed serial
// order (channels ascending, window slots ascending), so results are
// bit-identical across thread counts, ISA variants, and the unfold reference.
template <typename T>
void pam_fused_core(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                    const WindowConfig& cfg, int threads, Isa isa, FeatureMapT<T>& out,
                    std::vector<T>& att) {
    const i64 b = f.b, c = f.c, h = f.h, w = f.w, n = h * w;
    const i64 k = cfg.k, p = cfg.pad(), k2 = k * k;
    const auto& kr = kern::kernels<T>(isa);
    const T inv_sqrt_c = T(1) / std::sqrt(static_cast<T>(c));

    ExecOptions lin;
    lin.threads = threads;
    lin.isa = isa;
    FeatureMapT<T> kf = pointwise_linear(f, wts.phi, lin);
    FeatureMapT<T> vf = pointwise_linear(f, wts.omega, lin);

    parallel_for(b * h, threads, [&](i64 begin, i64 end) {
        std::vector<T> qrow(static_cast<size_t>(c * w));
        std::vector<T> mrow(static_cast<size_t>(w));
        std::vector<T> srow(static_cast<size_t>(w));
        for (i64 task = begin; task < end; ++task) {
            const i64 bi = task / h, y = task % h;

            for (i64 o = 0; o < c; ++o) {
                T* dst = qrow.data() + o * w;
                std::fill(dst, dst + w, wts.theta.bias[static_cast<size_t>(o)]);
                for (i64 ci = 0; ci < c; ++ci)
                    kr.acc_scal(dst, wts.theta.at(o, ci), f.plane(bi, ci) + y * w, w);
            }

            T* att_b = att.data() + bi * k2 * n;
            for (i64 t = 0; t < k2; ++t) {
                T* seg = att_b + t * n + y * w;
                const i64 dy = t / k - p, dx = t % k - p;
                const i64 sy = y + dy;
                if (sy >= 0 && sy < h) {
                    const i64 x0 = std::max<i64>(0, -dx);
                    const i64 x1 = std::min<i64>(w, w - dx);
                    if (x0 < x1)
                        for (i64 ci = 0; ci < c; ++ci)
                            kr.acc_mul(seg + x0, qrow.data() + ci * w + x0,
                                       kf.plane(bi, ci) + sy * w + x0 + dx, x1 - x0);
                }
                kr.scale(seg, inv_sqrt_c, w);
            }

            // Softmax over the k2 slots, vectorized across this row's pixels.
            std::copy(att_b + y * w, att_b + y * w + w, mrow.data());
            for (i64 t = 1; t < k2; ++t) kr.row_max(mrow.data(), att_b + t * n + y * w, w);
            std::fill(srow.begin(), srow.end(), T(0));
            for (i64 t = 0; t < k2; ++t) {
                T* seg = att_b + t * n + y * w;
                kr.sub_exp(seg, seg, mrow.data(), w);
                kr.acc_scal(srow.data(), T(1), seg, w);
            }
            for (i64 t = 0; t < k2; ++t) kr.row_div(att_b + t * n + y * w, srow.data(), w);

            for (i64 ci = 0; ci < c; ++ci) {
                T* orow = out.plane(bi, ci) + y * w;
                for (i64 t = 0; t < k2; ++t) {
                    const i64 dy = t / k - p, dx = t % k - p;
                    const i64 sy = y + dy;
                    if (sy < 0 || sy >= h) continue;
                    const i64 x0 = std::max<i64>(0, -dx);
                    const i64 x1 = std::min<i64>(w, w - dx);
                    if (x0 < x1)
                        kr.acc_mul(orow + x0, att_b + t * n + y * w + x0,
                                   vf.plane(bi, ci) + sy * w + x0 + dx, x1 - x0);
                }
            }
        }
    });
}

}  // namespace

template <typename T>
PamResultT<T> pam_forward(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                          const WindowConfig& cfg, const ExecOptions& opts) {
    check_pam_inputs(f, wts, cfg);
    const Isa isa = resolve_isa(opts.isa);
    const i64 n = f.n(), k2 = cfg.k * cfg.k;
    const size_t es = sizeof(T);
    const i64 workers = effective_workers(opts.threads, f.b * f.h);

    const size_t kv_bytes = static_cast<size_t>(2 * f.b * f.c * n) * es;
    const size_t att_bytes = static_cast<size_t>(f.b * k2 * n) * es;
    const size_t scratch_bytes = static_cast<size_t>(workers * (f.c + 2) * f.w) * es;
    opts.track_alloc(kv_bytes);
    opts.track_alloc(att_bytes);
    opts.track_alloc(scratch_bytes);
    FeatureMapT<T> out(f.b, f.c, f.h, f.w);
    opts.track_alloc(out.bytes());

    std::vector<T> att(static_cast<size_t>(f.b * k2 * n), T(0));
    pam_fused_core(f, wts, cfg, opts.threads, isa, out, att);
    opts.track_free(scratch_bytes);
    opts.track_free(kv_bytes);

    RelationTensorT<T> rel;
    rel.b = f.b;
    rel.n = n;
    rel.k2 = k2;
    rel.values.resize(static_cast<size_t>(f.b * n * k2));
    opts.track_alloc(rel.values.size() * es);
    for (i64 bi = 0; bi < f.b; ++bi)
        for (i64 t = 0; t < k2; ++t) {
            const T* src = att.data() + (bi * k2 + t) * n;
            T* dst = rel.values.data() + bi * n * k2 + t;
            for (i64 i = 0; i < n; ++i) dst[i * k2] = src[i];
        }
    opts.track_free(att_bytes);
    return {std::move(out), std::move(rel)};
}

template <typename T>
FeatureMapT<T> pam_forward_out(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                               const WindowConfig& cfg, const ExecOptions& opts) {
    check_pam_inputs(f, wts, cfg);
    const Isa isa = resolve_isa(opts.isa);
    const i64 n = f.n(), k2 = cfg.k * cfg.k;
    const size_t es = sizeof(T);
    const i64 workers = effective_workers(opts.threads, f.b * f.h);

    const size_t kv_bytes = static_cast<size_t>(2 * f.b * f.c * n) * es;
    const size_t att_bytes = static_cast<size_t>(f.b * k2 * n) * es;
    const size_t scratch_bytes = static_cast<size_t>(workers * (f.c + 2) * f.w) * es;
    opts.track_alloc(kv_bytes);
    opts.track_alloc(att_bytes);
    opts.track_alloc(scratch_bytes);
    FeatureMapT<T> out(f.b, f.c, f.h, f.w);
    opts.track_alloc(out.bytes());

    std::vector<T> att(static_cast<size_t>(f.b * k2 * n), T(0));
    pam_fused_core(f, wts, cfg, opts.threads, isa, out, att);
    opts.track_free(scratch_bytes);
    opts.track_free(kv_bytes);
    opts.track_free(att_bytes);
    return out;
}

template <typename T>
PamResultT<T> pam_forward_reference(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                                    const WindowConfig& cfg, const ExecOptions& opts) {
    check_pam_inputs(f, wts, cfg);
    const i64 b = f.b, c = f.c, n = f.n(), k2 = cfg.k * cfg.k;
    const size_t es = sizeof(T);
    const T inv_sqrt_c = T(1) / std::sqrt(static_cast<T>(c));

    ExecOptions ref;
    ref.threads = 1;
    ref.isa = Isa::Scalar;
    FeatureMapT<T> q = pointwise_linear(f, wts.theta, ref);
    opts.track_alloc(q.bytes());
    FeatureMapT<T> kf = pointwise_linear(f, wts.phi, ref);
    opts.track_alloc(kf.bytes());
    FeatureMapT<T> vf = pointwise_linear(f, wts.omega, ref);
    opts.track_alloc(vf.bytes());
    UnfoldedMapT<T> ku = unfold(kf, cfg);
    opts.track_alloc(ku.data.size() * es);
    UnfoldedMapT<T> vu = unfold(vf, cfg);
    opts.track_alloc(vu.data.size() * es);

    RelationTensorT<T> rel;
    rel.b = b;
    rel.n = n;
    rel.k2 = k2;
    rel.values.assign(static_cast<size_t>(b * n * k2), T(0));
    opts.track_alloc(rel.values.size() * es);
    FeatureMapT<T> out(b, c, f.h, f.w);
    opts.track_alloc(out.bytes());

    for (i64 bi = 0; bi < b; ++bi)
        for (i64 i = 0; i < n; ++i) {
            T* arow = rel.row(bi, i);
            for (i64 t = 0; t < k2; ++t) {
                T acc = T(0);
                for (i64 ci = 0; ci < c; ++ci)
                    acc += q.plane(bi, ci)[i] * ku.row(bi, ci * k2 + t)[i];
                arow[t] = acc * inv_sqrt_c;
            }
            T m = arow[0];
            for (i64 t = 1; t < k2; ++t) m = m < arow[t] ? arow[t] : m;
            T s = T(0);
            for (i64 t = 0; t < k2; ++t) {
                arow[t] = std::exp(arow[t] - m);
                s += arow[t];
            }
            for (i64 t = 0; t < k2; ++t) arow[t] /= s;
            for (i64 ci = 0; ci < c; ++ci) {
                T acc = T(0);
                for (i64 t = 0; t < k2; ++t)
                    acc += arow[t] * vu.row(bi, ci * k2 + t)[i];
                out.plane(bi, ci)[i] = acc;
            }
        }

    opts.track_free(q.bytes() + kf.bytes() + vf.bytes());
    opts.track_free((ku.data.size() + vu.data.size()) * es);
    return {std::move(out), std::move(rel)};
}

template <typename T>
FeatureMapT<T> halo_attention(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                              i64 block, i64 halo, const ExecOptions& opts) {
    wts.validate(f.c);
    PIXAD_CHECK(block >= 1, "block side must be >= 1");
    PIXAD_CHECK(halo >= 0, "halo width must be >= 0");
    PIXAD_CHECK(f.h % block == 0 && f.w % block == 0,
                "image dims must be divisible by the block side");
    const Isa isa = resolve_isa(opts.isa);
    const i64 b = f.b, c = f.c, h = f.h, w = f.w;
    const i64 by = h / block, bx = w / block, nb = by * bx;
    const i64 side = block + 2 * halo, m = side * side;
    const size_t es = sizeof(T);
    const T inv_sqrt_c = T(1) / std::sqrt(static_cast<T>(c));
    const i64 workers = effective_workers(opts.threads, b * nb);

    ExecOptions lin;
    lin.threads = opts.threads;
    lin.isa = isa;
    FeatureMapT<T> q = pointwise_linear(f, wts.theta, lin);
    FeatureMapT<T> kf = pointwise_linear(f, wts.phi, lin);
    FeatureMapT<T> vf = pointwise_linear(f, wts.omega, lin);
    const size_t qkv_bytes = q.bytes() + kf.bytes() + vf.bytes();
    const size_t tile_bytes = static_cast<size_t>(workers * m) * es;
    opts.track_alloc(qkv_bytes);
    opts.track_alloc(tile_bytes);
    FeatureMapT<T> out(b, c, h, w);
    opts.track_alloc(out.bytes());

    parallel_for(b * nb, opts.threads, [&](i64 begin, i64 end) {
        std::vector<T> logits(static_cast<size_t>(m));
        for (i64 task = begin; task < end; ++task) {
            const i64 bi = task / nb, tile = task % nb;
            const i64 y0 = (tile / bx) * block, x0 = (tile % bx) * block;
            for (i64 qy = y0; qy < y0 + block; ++qy)
                for (i64 qx = x0; qx < x0 + block; ++qx) {
                    const i64 qi = qy * w + qx;
                    i64 li = 0;
                    for (i64 sy = y0 - halo; sy < y0 + block + halo; ++sy)
                        for (i64 sx = x0 - halo; sx < x0 + block + halo; ++sx, ++li) {
                            if (sy < 0 || sy >= h || sx < 0 || sx >= w) {
                                logits[static_cast<size_t>(li)] = T(0);
                                continue;
                            }
                            T acc = T(0);
                            for (i64 ci = 0; ci < c; ++ci)
                                acc += q.plane(bi, ci)[qi] * kf.plane(bi, ci)[sy * w + sx];
                            logits[static_cast<size_t>(li)] = acc * inv_sqrt_c;
                        }
                    T mx = logits[0];
                    for (i64 t = 1; t < m; ++t) mx = mx < logits[t] ? logits[t] : mx;
                    T s = T(0);
                    for (i64 t = 0; t < m; ++t) {
                        logits[static_cast<size_t>(t)] = std::exp(logits[static_cast<size_t>(t)] - mx);
                        s += logits[static_cast<size_t>(t)];
                    }
                    for (i64 t = 0; t < m; ++t) logits[static_cast<size_t>(t)] /= s;
                    for (i64 ci = 0; ci < c; ++ci) {
                        T acc = T(0);
                        i64 t = 0;
                        for (i64 sy = y0 - halo; sy < y0 + block + halo; ++sy)
                            for (i64 sx = x0 - halo; sx < x0 + block + halo; ++sx, ++t) {
                                if (sy < 0 || sy >= h || sx < 0 || sx >= w) continue;
                                acc += logits[static_cast<size_t>(t)] *
                                       vf.plane(bi, ci)[sy * w + sx];
                            }
                        out.plane(bi, ci)[qi] = acc;
                    }
                }
        }
    });

    opts.track_free(tile_bytes);
    opts.track_free(qkv_bytes);
    return out;
}

namespace {

// Fixed 4-accumulator reduction: deterministic order, latency-friendly.
template <typename T>
T dot4(const T* a, const T* b, i64 len) {
    T s0 = T(0), s1 = T(0), s2 = T(0), s3 = T(0);
    i64 i = 0;
    for (; i + 4 <= len; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < len; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

}  // namespace

template <typename T>
FeatureMapT<T> global_attention(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                                const ExecOptions& opts) {
    wts.validate(f.c);
    const Isa isa = resolve_isa(opts.isa);
    const i64 b = f.b, c = f.c, n = f.n();
    const size_t es = sizeof(T);
    const auto& kr = kern::kernels<T>(isa);
    const T inv_sqrt_c = T(1) / std::sqrt(static_cast<T>(c));

    ExecOptions lin;
    lin.threads = opts.threads;
    lin.isa = isa;
    FeatureMapT<T> q = pointwise_linear(f, wts.theta, lin);
    FeatureMapT<T> kf = pointwise_linear(f, wts.phi, lin);
    FeatureMapT<T> vf = pointwise_linear(f, wts.omega, lin);
    const size_t qkv_bytes = q.bytes() + kf.bytes() + vf.bytes();
    const size_t score_bytes = static_cast<size_t>(n) * static_cast<size_t>(n) * es;
    opts.track_alloc(qkv_bytes);
    opts.track_alloc(score_bytes);
    FeatureMapT<T> out(b, c, f.h, f.w);
    opts.track_alloc(out.bytes());

    std::vector<T> scores(static_cast<size_t>(n) * static_cast<size_t>(n));
    for (i64 bi = 0; bi < b; ++bi) {
        parallel_for(n, opts.threads, [&](i64 begin, i64 end) {
            for (i64 i = begin; i < end; ++i) {
                T* srow = scores.data() + static_cast<size_t>(i) * n;
                std::fill(srow, srow + n, T(0));
                for (i64 ci = 0; ci < c; ++ci)
                    kr.acc_scal(srow, q.plane(bi, ci)[i], kf.plane(bi, ci), n);
                kr.scale(srow, inv_sqrt_c, n);
                T mx = srow[0];
                for (i64 j = 1; j < n; ++j) mx = mx < srow[j] ? srow[j] : mx;
                T s = T(0);
                for (i64 j = 0; j < n; ++j) {
                    srow[j] = std::exp(srow[j] - mx);
                    s += srow[j];
                }
                for (i64 j = 0; j < n; ++j) srow[j] /= s;
                for (i64 ci = 0; ci < c; ++ci)
                    out.plane(bi, ci)[i] = dot4(srow, vf.plane(bi, ci), n);
            }
        });
    }

    opts.track_free(score_bytes);
    opts.track_free(qkv_bytes);
    return out;
}

const char* kernel_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::Pam: return "pam";
        case KernelKind::Pga: return "pga";
        case KernelKind::Halo: return "halo";
        case KernelKind::Global: return "global";
    }
    fail("unknown kernel kind");
}

bool parse_kernel_kind(const std::string& name, KernelKind& out) {
    if (name == "pam") out = KernelKind::Pam;
    else if (name == "pga") out = KernelKind::Pga;
    else if (name == "halo") out = KernelKind::Halo;
    else if (name == "global") out = KernelKind::Global;
    else return false;
    return true;
}

u64 flops_estimate(KernelKind kind, i64 b, i64 c, i64 h, i64 w, const WindowConfig& cfg) {
    PIXAD_CHECK(b >= 1 && c >= 1 && h >= 1 && w >= 1, "dims must all be >= 1");
    cfg.validate();
    const u64 ub = static_cast<u64>(b), uc = static_cast<u64>(c);
    const u64 n = static_cast<u64>(h) * static_cast<u64>(w);
    const u64 k = static_cast<u64>(cfg.k), k2 = k * k;
    switch (kind) {
        case KernelKind::Pam: return 2 * ub * n * k2 * uc;
        case KernelKind::Global: return 2 * ub * n * n * uc;
        case KernelKind::Halo: return 2 * ub * (n / k) * (n / k) * uc;
        case KernelKind::Pga: return ub * (2 * n * n * uc + n * n);
    }
    fail("unknown kernel kind");
}

template PamResultT<float> pam_forward<float>(const FeatureMapT<float>&,
                                              const PamWeightsT<float>&,
                                              const WindowConfig&, const ExecOptions&);
template PamResultT<double> pam_forward<double>(const FeatureMapT<double>&,
                                                const PamWeightsT<double>&,
                                                const WindowConfig&, const ExecOptions&);
template FeatureMapT<float> pam_forward_out<float>(const FeatureMapT<float>&,
                                                   const PamWeightsT<float>&,
                                                   const WindowConfig&,
                                                   const ExecOptions&);
template FeatureMapT<double> pam_forward_out<double>(const FeatureMapT<double>&,
                                                     const PamWeightsT<double>&,
                                                     const WindowConfig&,
                                                     const ExecOptions&);
template PamResultT<float> pam_forward_reference<float>(const FeatureMapT<float>&,
                                                        const PamWeightsT<float>&,
                                                        const WindowConfig&,
                                                        const ExecOptions&);
template PamResultT<double> pam_forward_reference<double>(const FeatureMapT<double>&,
                                                          const PamWeightsT<double>&,
                                                          const WindowConfig&,
                                                          const ExecOptions&);
template FeatureMapT<float> halo_attention<float>(const FeatureMapT<float>&,
                                                  const PamWeightsT<float>&, i64, i64,
                                                  const ExecOptions&);
template FeatureMapT<double> halo_attention<double>(const FeatureMapT<double>&,
                                                    const PamWeightsT<double>&, i64, i64,
                                                    const ExecOptions&);
template FeatureMapT<float> global_attention<float>(const FeatureMapT<float>&,
                                                    const PamWeightsT<float>&,
                                                    const ExecOptions&);
template FeatureMapT<double> global_attention<double>(const FeatureMapT<double>&,
                                                      const PamWeightsT<double>&,
                                                      const ExecOptions&);

}  // namespace pixad
