#pragma once

#include "pixad/tensor_ops.hpp"

namespace pixad {

// theta/phi/omega: the query/key/value 1x1 transforms (all c -> c).
template <typename T>
struct PamWeightsT {
    LinearWeightsT<T> theta, phi, omega;

    static PamWeightsT random(u64 seed, i64 c, bool with_bias = false) {
        PamWeightsT w;
        w.theta = LinearWeightsT<T>(c, c);
        w.phi = LinearWeightsT<T>(c, c);
        w.omega = LinearWeightsT<T>(c, c);
        SeededRng rng(seed);
        rng.fill(w.theta, with_bias);
        rng.fill(w.phi, with_bias);
        rng.fill(w.omega, with_bias);
        return w;
    }
    void validate(i64 c) const {
        PIXAD_CHECK(theta.c_out == c && theta.c_in == c && phi.c_out == c &&
                        phi.c_in == c && omega.c_out == c && omega.c_in == c,
                    "pam weights must be c x c with matching channel count");
    }
};

using PamWeights = PamWeightsT<double>;

// Per-pixel attention rows over the k*k window slots: values[b, n, k2],
// each row positive and summing to 1.
template <typename T>
struct RelationTensorT {
    i64 b = 0, n = 0, k2 = 0;
    std::vector<T> values;

    T* row(i64 bi, i64 i) { return values.data() + (bi * n + i) * k2; }
    const T* row(i64 bi, i64 i) const { return values.data() + (bi * n + i) * k2; }
};

using RelationTensor = RelationTensorT<double>;

template <typename T>
struct PamResultT {
    FeatureMapT<T> out;
    RelationTensorT<T> attention;
};

using PamResult = PamResultT<double>;

// Sliding-window pixel attention. Per pixel i: q = theta(f)_i; logits over the
// k*k window slots t are <q, phi(f)_{nb(i,t)}> / sqrt(c) with zero-padded
// out-of-image slots kept in the softmax (logit 0); output is the attention-
// weighted sum of omega(f) over the window. Row-parallel, ISA-dispatched;
// bit-identical across thread counts and ISA variants.
template <typename T>
PamResultT<T> pam_forward(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                          const WindowConfig& cfg, const ExecOptions& opts = {});

// Same kernel without assembling the [b, n, k2] relation tensor (bench path).
template <typename T>
FeatureMapT<T> pam_forward_out(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                               const WindowConfig& cfg, const ExecOptions& opts = {});

// Literal unfold transcription: q = theta(f); K = unfold(phi(f));
// V = unfold(omega(f)); single-threaded scalar. Semantics anchor for tests;
// bit-identical to pam_forward by construction.
template <typename T>
PamResultT<T> pam_forward_reference(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                                    const WindowConfig& cfg,
                                    const ExecOptions& opts = {});

struct PamGradients {
    FeatureMap d_input;
    LinearWeights d_theta, d_phi, d_omega;
};

// Analytic adjoint of pam_forward for L = sum(upstream (*) out).
PamGradients pam_backward(const FeatureMap& f, const PamWeights& wts,
                          const WindowConfig& cfg, const FeatureMap& upstream);

// Blocked-local attention: queries in a block x block tile attend to the tile
// plus a halo ring, zero-padded at image borders (padded slots stay in the
// softmax, matching pam semantics).
template <typename T>
FeatureMapT<T> halo_attention(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                              i64 block, i64 halo, const ExecOptions& opts = {});

// Full n x n scaled-dot-product attention with the same q/k/v transforms.
template <typename T>
FeatureMapT<T> global_attention(const FeatureMapT<T>& f, const PamWeightsT<T>& wts,
                                const ExecOptions& opts = {});

enum class KernelKind { Pam, Pga, Halo, Global };

const char* kernel_name(KernelKind kind);
bool parse_kernel_kind(const std::string& name, KernelKind& out);

// Dominant-term MAC estimates, n = h*w:
//   pam    2*b*n*k^2*c
//   global 2*b*n^2*c
//   halo   2*b*(n/k)^2*c      (block-wise taxonomy formula, window = k)
//   pga    b*(2*n^2*c + n^2)  (dense adjacency route: full-pair qk/av MACs
//                              plus the n^2 score materialization it forces)
u64 flops_estimate(KernelKind kind, i64 b, i64 c, i64 h, i64 w, const WindowConfig& cfg);

extern template PamResultT<float> pam_forward<float>(const FeatureMapT<float>&,
                                                     const PamWeightsT<float>&,
                                                     const WindowConfig&,
                                                     const ExecOptions&);
extern template PamResultT<double> pam_forward<double>(const FeatureMapT<double>&,
                                                       const PamWeightsT<double>&,
                                                       const WindowConfig&,
                                                       const ExecOptions&);
extern template FeatureMapT<float> pam_forward_out<float>(const FeatureMapT<float>&,
                                                          const PamWeightsT<float>&,
                                                          const WindowConfig&,
                                                          const ExecOptions&);
extern template FeatureMapT<double> pam_forward_out<double>(const FeatureMapT<double>&,
                                                            const PamWeightsT<double>&,
                                                            const WindowConfig&,
                                                            const ExecOptions&);
extern template PamResultT<float> pam_forward_reference<float>(const FeatureMapT<float>&,
                                                               const PamWeightsT<float>&,
                                                               const WindowConfig&,
                                                               const ExecOptions&);
extern template PamResultT<double> pam_forward_reference<double>(
    const FeatureMapT<double>&, const PamWeightsT<double>&, const WindowConfig&,
    const ExecOptions&);
extern template FeatureMapT<float> halo_attention<float>(const FeatureMapT<float>&,
                                                         const PamWeightsT<float>&, i64,
                                                         i64, const ExecOptions&);
extern template FeatureMapT<double> halo_attention<double>(const FeatureMapT<double>&,
                                                           const PamWeightsT<double>&,
                                                           i64, i64, const ExecOptions&);
extern template FeatureMapT<float> global_attention<float>(const FeatureMapT<float>&,
                                                           const PamWeightsT<float>&,
                                                           const ExecOptions&);
extern template FeatureMapT<double> global_attention<double>(const FeatureMapT<double>&,
                                                             const PamWeightsT<double>&,
                                                             const ExecOptions&);

}  // namespace pixad
