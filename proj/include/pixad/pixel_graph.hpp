#pragma once

#include "pixad/attention.hpp"

namespace pixad {

// Image-as-graph adjacency for a k x k window. neighbors[i] lists the k*k
// window slots of node i in row-major window order; out-of-image slots hold
// kPad. dense_mask is the full n x n adjacency the formulation forces.
struct PgaGraph {
    static constexpr std::int32_t kPad = -1;

    i64 h = 0, w = 0, k = 0;
    std::vector<std::int32_t> neighbors;  // [n, k*k]
    std::vector<std::uint8_t> dense_mask;  // [n, n]

    i64 n() const { return h * w; }
    const std::int32_t* slots(i64 i) const { return neighbors.data() + i * k * k; }
    bool adjacent(i64 i, i64 j) const { return dense_mask[i * n() + j] != 0; }
};

PgaGraph build_pixel_graph(i64 h, i64 w, const WindowConfig& cfg);

// Dense adjacency-matrix oracle for pam_forward. Node by node, single thread,
// memory-heavy by design: scores for every (i, j) pair are computed (masked-out
// pairs against zero-feature nodes), the n x n score and attention matrices are
// both materialized, and aggregation runs dense over all j. Semantics match
// pam_forward exactly; cost is the point.
template <typename T>
PamResultT<T> pga_reference(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                            const PgaGraph& graph, const ExecOptions& opts = {});

// Adjacency-list variant, correctness cross-check only (never benchmarked).
template <typename T>
PamResultT<T> pga_reference_list(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                                 const PgaGraph& graph);

extern template PamResultT<float> pga_reference<float>(const FeatureMapT<float>&,
                                                       const PamWeightsT<float>&,
                                                       const PgaGraph&,
                                                       const ExecOptions&);
extern template PamResultT<double> pga_reference<double>(const FeatureMapT<double>&,
                                                         const PamWeightsT<double>&,
                                                         const PgaGraph&,
                                                         const ExecOptions&);
extern template PamResultT<float> pga_reference_list<float>(const FeatureMapT<float>&,
                                                            const PamWeightsT<float>&,
                                                            const PgaGraph&);
extern template PamResultT<double> pga_reference_list<double>(const FeatureMapT<double>&,
                                                              const PamWeightsT<double>&,
                                                              const PgaGraph&);

}  // namespace pixad
