#include "pixad/pixel_graph.hpp"

#include <algorithm>
#include <cmath>

namespace pixad {

PgaGraph build_pixel_graph(i64 h, i64 w, const WindowConfig& cfg) {
    PIXAD_CHECK(h >= 1 && w >= 1, "graph dims must be >= 1");
    cfg.validate();
    PIXAD_CHECK(cfg.k <= 2 * std::min(h, w) + 1,
                "window would exceed the zero-padded image");
    const i64 k = cfg.k, p = cfg.pad(), n = h * w;
    PgaGraph g;
    g.h = h;
    g.w = w;
    g.k = k;
    g.neighbors.assign(static_cast<size_t>(n * k * k), PgaGraph::kPad);
    g.dense_mask.assign(static_cast<size_t>(n) * static_cast<size_t>(n), 0);
    for (i64 i = 0; i < n; ++i) {
        const i64 y = i / w, x = i % w;
        for (i64 t = 0; t < k * k; ++t) {
            const i64 sy = y + t / k - p, sx = x + t % k - p;
            if (sy < 0 || sy >= h || sx < 0 || sx >= w) continue;
            const i64 j = sy * w + sx;
            g.neighbors[static_cast<size_t>(i * k * k + t)] = static_cast<std::int32_t>(j);
            g.dense_mask[static_cast<size_t>(i) * n + static_cast<size_t>(j)] = 1;
        }
    }
    return g;
}

namespace {

template <typename T>
void check_pga_inputs(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                      const PgaGraph& graph) {
    wts.validate(f.c);
    PIXAD_CHECK(graph.h == f.h && graph.w == f.w,
                "graph was built for different spatial dims");
    PIXAD_CHECK(graph.k >= 1 && graph.k % 2 == 1, "graph window must be odd");
}

}  // namespace

template <typename T>
PamResultT<T> pga_reference(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                            const PgaGraph& graph, const ExecOptions& opts) {
    check_pga_inputs(f, wts, graph);
    const i64 b = f.b, c = f.c, n = f.n(), k2 = graph.k * graph.k;
    const size_t es = sizeof(T);
    const size_t nn = static_cast<size_t>(n) * static_cast<size_t>(n);
    const T sqrt_c = std::sqrt(static_cast<T>(c));

    ExecOptions ref;
    ref.threads = 1;
    ref.isa = Isa::Scalar;
    FeatureMapT<T> q = pointwise_linear(f, wts.theta, ref);
    FeatureMapT<T> kf = pointwise_linear(f, wts.phi, ref);
    FeatureMapT<T> vf = pointwise_linear(f, wts.omega, ref);
    opts.track_alloc(q.bytes() + kf.bytes() + vf.bytes());
    // The adjacency formulation materializes both dense n x n matrices.
    opts.track_alloc(nn * es);  // scores
    opts.track_alloc(nn * es);  // attention
    FeatureMapT<T> out(b, c, f.h, f.w);
    opts.track_alloc(out.bytes());
    RelationTensorT<T> rel;
    rel.b = b;
    rel.n = n;
    rel.k2 = k2;
    rel.values.assign(static_cast<size_t>(b * n * k2), T(0));
    opts.track_alloc(rel.values.size() * es);

    std::vector<T> scores(nn);
    std::vector<T> att(nn);
    std::vector<T> slot(static_cast<size_t>(k2));

    for (i64 bi = 0; bi < b; ++bi) {
        // Dense scores: every (i, j) pair, masked-out pairs against
        // zero-feature nodes. The Theta(n^2 c) sweep is the design under test.
        for (i64 i = 0; i < n; ++i) {
            T* srow = scores.data() + static_cast<size_t>(i) * n;
            for (i64 j = 0; j < n; ++j) {
                T acc = T(0);
                if (graph.dense_mask[static_cast<size_t>(i) * n + j]) {
                    for (i64 ci = 0; ci < c; ++ci)
                        acc += q.plane(bi, ci)[i] * kf.plane(bi, ci)[j];
                } else {
                    for (i64 ci = 0; ci < c; ++ci)
                        acc += q.plane(bi, ci)[i] * T(0);
                }
                srow[j] = acc / sqrt_c;
            }
        }

        std::fill(att.begin(), att.end(), T(0));
        for (i64 i = 0; i < n; ++i) {
            const std::int32_t* sl = graph.slots(i);
            for (i64 t = 0; t < k2; ++t)
                slot[static_cast<size_t>(t)] =
                    sl[t] >= 0 ? scores[static_cast<size_t>(i) * n + sl[t]] : T(0);
            T m = slot[0];
            for (i64 t = 1; t < k2; ++t) m = std::max(m, slot[static_cast<size_t>(t)]);
            T s = T(0);
            for (i64 t = 0; t < k2; ++t) {
                slot[static_cast<size_t>(t)] = std::exp(slot[static_cast<size_t>(t)] - m);
                s += slot[static_cast<size_t>(t)];
            }
            T* arow = rel.row(bi, i);
            for (i64 t = 0; t < k2; ++t) {
                arow[t] = slot[static_cast<size_t>(t)] / s;
                if (sl[t] >= 0) att[static_cast<size_t>(i) * n + sl[t]] = arow[t];
            }
        }

        // Dense aggregation over all j (zeros included), node by node.
        for (i64 i = 0; i < n; ++i) {
            const T* arow = att.data() + static_cast<size_t>(i) * n;
            for (i64 ci = 0; ci < c; ++ci) {
                T acc = T(0);
                const T* vrow = vf.plane(bi, ci);
                for (i64 j = 0; j < n; ++j) acc += arow[j] * vrow[j];
                out.plane(bi, ci)[i] = acc;
            }
        }
    }

    opts.track_free(2 * nn * es);
    opts.track_free(q.bytes() + kf.bytes() + vf.bytes());
    return {std::move(out), std::move(rel)};
}

template <typename T>
PamResultT<T> pga_reference_list(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                                 const PgaGraph& graph) {
    check_pga_inputs(f, wts, graph);
    const i64 b = f.b, c = f.c, n = f.n(), k2 = graph.k * graph.k;
    const T sqrt_c = std::sqrt(static_cast<T>(c));

    ExecOptions ref;
    ref.threads = 1;
    ref.isa = Isa::Scalar;
    FeatureMapT<T> q = pointwise_linear(f, wts.theta, ref);
    FeatureMapT<T> kf = pointwise_linear(f, wts.phi, ref);
    FeatureMapT<T> vf = pointwise_linear(f, wts.omega, ref);
    FeatureMapT<T> out(b, c, f.h, f.w);
    RelationTensorT<T> rel;
    rel.b = b;
    rel.n = n;
    rel.k2 = k2;
    rel.values.assign(static_cast<size_t>(b * n * k2), T(0));

    std::vector<T> slot(static_cast<size_t>(k2));
    for (i64 bi = 0; bi < b; ++bi)
        for (i64 i = 0; i < n; ++i) {
            const std::int32_t* sl = graph.slots(i);
            for (i64 t = 0; t < k2; ++t) {
                T acc = T(0);
                if (sl[t] >= 0)
                    for (i64 ci = 0; ci < c; ++ci)
                        acc += q.plane(bi, ci)[i] * kf.plane(bi, ci)[sl[t]];
                slot[static_cast<size_t>(t)] = acc / sqrt_c;
            }
            T m = slot[0];
            for (i64 t = 1; t < k2; ++t) m = std::max(m, slot[static_cast<size_t>(t)]);
            T s = T(0);
            for (i64 t = 0; t < k2; ++t) {
                slot[static_cast<size_t>(t)] = std::exp(slot[static_cast<size_t>(t)] - m);
                s += slot[static_cast<size_t>(t)];
            }
            T* arow = rel.row(bi, i);
            for (i64 t = 0; t < k2; ++t) arow[t] = slot[static_cast<size_t>(t)] / s;
            for (i64 ci = 0; ci < c; ++ci) {
                T acc = T(0);
                for (i64 t = 0; t < k2; ++t)
                    if (sl[t] >= 0) acc += arow[t] * vf.plane(bi, ci)[sl[t]];
                out.plane(bi, ci)[i] = acc;
            }
        }
    return {std::move(out), std::move(rel)};
}

template PamResultT<float> pga_reference<float>(const FeatureMapT<float>&,
                                                const PamWeightsT<float>&,
                                                const PgaGraph&, const ExecOptions&);
template PamResultT<double> pga_reference<double>(const FeatureMapT<double>&,
                                                  const PamWeightsT<double>&,
                                                  const PgaGraph&, const ExecOptions&);
template PamResultT<float> pga_reference_list<float>(const FeatureMapT<float>&,
                                                     const PamWeightsT<float>&,
                                                     const PgaGraph&);
template PamResultT<double> pga_reference_list<double>(const FeatureMapT<double>&,
                                                       const PamWeightsT<double>&,
                                                       const PgaGraph&);

}  // namespace pixad
