#pragma once

#include <iosfwd>

#include "pixad/tensor_ops.hpp"

namespace pixad {

// Square full-axis mixing matrix (height- or width-sized).
struct AxialMatrix {
    i64 dim = 0;
    std::vector<double> m;  // [dim, dim] row-major

    AxialMatrix() = default;
    explicit AxialMatrix(i64 d) : dim(d), m(static_cast<size_t>(d * d), 0.0) {
        PIXAD_CHECK(d >= 1, "axial matrix dim must be >= 1");
    }
    static AxialMatrix identity(i64 d) {
        AxialMatrix a(d);
        for (i64 i = 0; i < d; ++i) a.at(i, i) = 1.0;
        return a;
    }
    double& at(i64 r, i64 c) { return m[static_cast<size_t>(r * dim + c)]; }
    double at(i64 r, i64 c) const { return m[static_cast<size_t>(r * dim + c)]; }
};

// Two-layer pointwise MLP with GELU between; "MLP" means exactly this shape
// everywhere in the block.
struct MlpWeights {
    LinearWeights fc1, fc2;
};

// Gate order i, f, g, o stacked along the first axis.
struct LstmWeights {
    i64 in_dim = 0, hidden = 0;
    std::vector<double> w_ih;  // [4*hidden, in_dim]
    std::vector<double> w_hh;  // [4*hidden, hidden]
    std::vector<double> b;     // [4*hidden]

    LstmWeights() = default;
    LstmWeights(i64 in, i64 hid)
        : in_dim(in),
          hidden(hid),
          w_ih(static_cast<size_t>(4 * hid * in), 0.0),
          w_hh(static_cast<size_t>(4 * hid * hid), 0.0),
          b(static_cast<size_t>(4 * hid), 0.0) {
        PIXAD_CHECK(in >= 1 && hid >= 1, "lstm dims must be >= 1");
    }
};

struct MsrbWeights {
    AxialMatrix axial_h, axial_w;         // plain height/width branches
    LinearWeights channel_fc;             // z (amplitude / channel branch)
    LinearWeights phase_fc;               // theta
    AxialMatrix amp_t_h, amp_t_w;         // cos-branch mixing per direction
    AxialMatrix amp_i_h, amp_i_w;         // sin-branch mixing per direction
    MlpWeights fusion_mlp;                // wave-fusion output MLP
    MlpWeights ffn;                       // feed-forward block
    LstmWeights lstm_fwd, lstm_bwd;
    LinearWeights proj;                   // hidden -> c after direction sum

    // Zero-initialized, mutually consistent shapes for a [b, c, h, w] input
    // with a c_t-channel clue map and the given recurrent width.
    static MsrbWeights zeros(i64 c, i64 c_t, i64 h, i64 w, i64 hidden);
    static MsrbWeights random(u64 seed, i64 c, i64 c_t, i64 h, i64 w, i64 hidden,
                              double scale = 0.25);
    void validate(i64 c, i64 c_t, i64 h, i64 w) const;
};

inline constexpr int kDefaultMsrbLayers = 5;

enum class Axis { Height, Width };

double gelu(double x);  // exact: 0.5 x (1 + erf(x / sqrt(2)))

// Full-axis FC along one spatial axis; every other index is a batch dim.
FeatureMap axial_fc(const FeatureMap& f, Axis axis, const AxialMatrix& m);

// Wave fusion: z = channel_fc(f), theta = phase_fc(f); per-direction mixing of
// z*cos(theta) and z*sin(theta) via amp_t/amp_i; directions summed, then the
// fusion MLP.
FeatureMap patm_fuse(const FeatureMap& f, const MsrbWeights& wts);

// f + patm_fuse(axial_h branch + axial_w branch + channel_fc branch).
FeatureMap madm(const FeatureMap& f, const MsrbWeights& wts);

// f + fc2(gelu(fc1(f))).
FeatureMap mlp_ffn(const FeatureMap& f, const MsrbWeights& wts);

// Bidirectional LSTM along width, one sequence per (batch, row); direction
// outputs summed, then projected pointwise.
FeatureMap blstm_forward(const FeatureMap& f, const MsrbWeights& wts);

FeatureMap concat_channels(const FeatureMap& a, const FeatureMap& b);

// blstm(concat(mlp_ffn(madm(i_lr)), h_t)); h_t may have zero influence but its
// dims must match spatially. Pass c_t = 0 via an empty optional clue.
FeatureMap msrb_forward(const FeatureMap& i_lr, const FeatureMap* h_t,
                        const MsrbWeights& wts);

// layers[0] applied first; every layer sees the same clue.
FeatureMap msrb_stack(const FeatureMap& i_lr, const FeatureMap* h_t,
                      const std::vector<MsrbWeights>& layers);

// Manifest + flat little-endian doubles; round-trips MsrbWeights exactly.
void save_msrb_weights(const MsrbWeights& w, std::ostream& os);
MsrbWeights load_msrb_weights(std::istream& is);

}  // namespace pixad
