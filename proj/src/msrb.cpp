#include "pixad/msrb.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "pixad/detail/serial.hpp"

namespace pixad {

MsrbWeights MsrbWeights::zeros(i64 c, i64 c_t, i64 h, i64 w, i64 hidden) {
    PIXAD_CHECK(c >= 1 && c_t >= 0 && h >= 1 && w >= 1 && hidden >= 1,
                "inconsistent msrb dims");
    MsrbWeights m;
    m.axial_h = AxialMatrix(h);
    m.axial_w = AxialMatrix(w);
    m.channel_fc = LinearWeights(c, c);
    m.phase_fc = LinearWeights(c, c);
    m.amp_t_h = AxialMatrix(h);
    m.amp_t_w = AxialMatrix(w);
    m.amp_i_h = AxialMatrix(h);
    m.amp_i_w = AxialMatrix(w);
    m.fusion_mlp = {LinearWeights(c, c), LinearWeights(c, c)};
    m.ffn = {LinearWeights(c, c), LinearWeights(c, c)};
    m.lstm_fwd = LstmWeights(c + c_t, hidden);
    m.lstm_bwd = LstmWeights(c + c_t, hidden);
    m.proj = LinearWeights(c, hidden);
    return m;
}

MsrbWeights MsrbWeights::random(u64 seed, i64 c, i64 c_t, i64 h, i64 w, i64 hidden,
                                double scale) {
    MsrbWeights m = zeros(c, c_t, h, w, hidden);
    SeededRng rng(seed);
    auto fill_vec = [&](std::vector<double>& v) {
        for (auto& x : v) x = rng.next_symmetric() * scale;
    };
    auto fill_lin = [&](LinearWeights& l) {
        fill_vec(l.w);
        fill_vec(l.bias);
    };
    fill_vec(m.axial_h.m);
    fill_vec(m.axial_w.m);
    fill_lin(m.channel_fc);
    fill_lin(m.phase_fc);
    fill_vec(m.amp_t_h.m);
    fill_vec(m.amp_t_w.m);
    fill_vec(m.amp_i_h.m);
    fill_vec(m.amp_i_w.m);
    fill_lin(m.fusion_mlp.fc1);
    fill_lin(m.fusion_mlp.fc2);
    fill_lin(m.ffn.fc1);
    fill_lin(m.ffn.fc2);
    fill_vec(m.lstm_fwd.w_ih);
    fill_vec(m.lstm_fwd.w_hh);
    fill_vec(m.lstm_fwd.b);
    fill_vec(m.lstm_bwd.w_ih);
    fill_vec(m.lstm_bwd.w_hh);
    fill_vec(m.lstm_bwd.b);
    fill_lin(m.proj);
    return m;
}

void MsrbWeights::validate(i64 c, i64 c_t, i64 h, i64 w) const {
    PIXAD_CHECK(axial_h.dim == h && axial_w.dim == w, "axial matrix dims mismatch");
    PIXAD_CHECK(channel_fc.c_out == c && channel_fc.c_in == c, "channel_fc dims mismatch");
    PIXAD_CHECK(phase_fc.c_out == c && phase_fc.c_in == c, "phase_fc dims mismatch");
    PIXAD_CHECK(amp_t_h.dim == h && amp_i_h.dim == h && amp_t_w.dim == w &&
                    amp_i_w.dim == w,
                "amplitude mixing dims mismatch");
    PIXAD_CHECK(fusion_mlp.fc1.c_in == c && fusion_mlp.fc2.c_out == c &&
                    fusion_mlp.fc2.c_in == fusion_mlp.fc1.c_out,
                "fusion mlp dims mismatch");
    PIXAD_CHECK(ffn.fc1.c_in == c && ffn.fc2.c_out == c &&
                    ffn.fc2.c_in == ffn.fc1.c_out,
                "ffn dims mismatch");
    PIXAD_CHECK(lstm_fwd.in_dim == c + c_t && lstm_bwd.in_dim == c + c_t,
                "lstm input width mismatch");
    PIXAD_CHECK(lstm_fwd.hidden == lstm_bwd.hidden, "lstm hidden widths differ");
    PIXAD_CHECK(proj.c_in == lstm_fwd.hidden && proj.c_out == c,
                "projection dims mismatch");
}

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))); }

FeatureMap axial_fc(const FeatureMap& f, Axis axis, const AxialMatrix& m) {
    const i64 len = axis == Axis::Height ? f.h : f.w;
    PIXAD_CHECK(m.dim == len, "axial matrix side must equal the axis length");
    FeatureMap out(f.b, f.c, f.h, f.w);
    for (i64 bi = 0; bi < f.b; ++bi)
        for (i64 ci = 0; ci < f.c; ++ci) {
            const double* src = f.plane(bi, ci);
            double* dst = out.plane(bi, ci);
            if (axis == Axis::Height) {
                for (i64 x = 0; x < f.w; ++x)
                    for (i64 y = 0; y < f.h; ++y) {
                        double acc = 0.0;
                        for (i64 r = 0; r < f.h; ++r) acc += m.at(y, r) * src[r * f.w + x];
                        dst[y * f.w + x] = acc;
                    }
            } else {
                for (i64 y = 0; y < f.h; ++y)
                    for (i64 x = 0; x < f.w; ++x) {
                        double acc = 0.0;
                        for (i64 r = 0; r < f.w; ++r) acc += m.at(x, r) * src[y * f.w + r];
                        dst[y * f.w + x] = acc;
                    }
            }
        }
    return out;
}

namespace {

FeatureMap apply_mlp(const FeatureMap& f, const MlpWeights& m) {
    FeatureMap hid = pointwise_linear(f, m.fc1);
    for (auto& v : hid.data) v = gelu(v);
    return pointwise_linear(hid, m.fc2);
}

FeatureMap add(const FeatureMap& a, const FeatureMap& b) {
    PIXAD_CHECK(a.b == b.b && a.c == b.c && a.h == b.h && a.w == b.w,
                "feature map shape mismatch");
    FeatureMap out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    return out;
}

}  // namespace

FeatureMap patm_fuse(const FeatureMap& f, const MsrbWeights& wts) {
    FeatureMap z = pointwise_linear(f, wts.channel_fc);
    FeatureMap th = pointwise_linear(f, wts.phase_fc);
    FeatureMap cosm = z, sinm = z;
    for (size_t i = 0; i < z.data.size(); ++i) {
        cosm.data[i] = z.data[i] * std::cos(th.data[i]);
        sinm.data[i] = z.data[i] * std::sin(th.data[i]);
    }
    FeatureMap branch_h =
        add(axial_fc(cosm, Axis::Height, wts.amp_t_h), axial_fc(sinm, Axis::Height, wts.amp_i_h));
    FeatureMap branch_w =
        add(axial_fc(cosm, Axis::Width, wts.amp_t_w), axial_fc(sinm, Axis::Width, wts.amp_i_w));
    return apply_mlp(add(branch_h, branch_w), wts.fusion_mlp);
}

FeatureMap madm(const FeatureMap& f, const MsrbWeights& wts) {
    FeatureMap branches = add(add(axial_fc(f, Axis::Height, wts.axial_h),
                                  axial_fc(f, Axis::Width, wts.axial_w)),
                              pointwise_linear(f, wts.channel_fc));
    return add(f, patm_fuse(branches, wts));
}

FeatureMap mlp_ffn(const FeatureMap& f, const MsrbWeights& wts) {
    return add(f, apply_mlp(f, wts.ffn));
}

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// One direction along width; emits hidden states into hs[x * hidden + j].
void lstm_direction(const double* const* chan, i64 c, i64 w, const LstmWeights& lw,
                    bool reverse, std::vector<double>& hs) {
    const i64 hid = lw.hidden;
    std::vector<double> h(static_cast<size_t>(hid), 0.0);
    std::vector<double> cell(static_cast<size_t>(hid), 0.0);
    std::vector<double> gates(static_cast<size_t>(4 * hid));
    for (i64 step = 0; step < w; ++step) {
        const i64 x = reverse ? w - 1 - step : step;
        for (i64 g = 0; g < 4 * hid; ++g) {
            double acc = lw.b[static_cast<size_t>(g)];
            for (i64 ci = 0; ci < c; ++ci)
                acc += lw.w_ih[static_cast<size_t>(g * c + ci)] * chan[ci][x];
            for (i64 j = 0; j < hid; ++j)
                acc += lw.w_hh[static_cast<size_t>(g * hid + j)] * h[static_cast<size_t>(j)];
            gates[static_cast<size_t>(g)] = acc;
        }
        for (i64 j = 0; j < hid; ++j) {
            const double ig = sigmoid(gates[static_cast<size_t>(j)]);
            const double fg = sigmoid(gates[static_cast<size_t>(hid + j)]);
            const double gg = std::tanh(gates[static_cast<size_t>(2 * hid + j)]);
            const double og = sigmoid(gates[static_cast<size_t>(3 * hid + j)]);
            cell[static_cast<size_t>(j)] = fg * cell[static_cast<size_t>(j)] + ig * gg;
            h[static_cast<size_t>(j)] = og * std::tanh(cell[static_cast<size_t>(j)]);
        }
        for (i64 j = 0; j < hid; ++j)
            hs[static_cast<size_t>(x * hid + j)] += h[static_cast<size_t>(j)];
    }
}

}  // namespace

FeatureMap blstm_forward(const FeatureMap& f, const MsrbWeights& wts) {
    PIXAD_CHECK(wts.lstm_fwd.in_dim == f.c && wts.lstm_bwd.in_dim == f.c,
                "lstm input width must equal the channel count");
    PIXAD_CHECK(wts.lstm_fwd.hidden == wts.lstm_bwd.hidden, "lstm hidden widths differ");
    PIXAD_CHECK(wts.proj.c_in == wts.lstm_fwd.hidden, "projection input mismatch");
    const i64 hid = wts.lstm_fwd.hidden;
    FeatureMap out(f.b, wts.proj.c_out, f.h, f.w);
    std::vector<const double*> chan(static_cast<size_t>(f.c));
    std::vector<double> hs(static_cast<size_t>(f.w * hid));
    for (i64 bi = 0; bi < f.b; ++bi)
        for (i64 y = 0; y < f.h; ++y) {
            for (i64 ci = 0; ci < f.c; ++ci)
                chan[static_cast<size_t>(ci)] = f.plane(bi, ci) + y * f.w;
            std::fill(hs.begin(), hs.end(), 0.0);
            lstm_direction(chan.data(), f.c, f.w, wts.lstm_fwd, false, hs);
            lstm_direction(chan.data(), f.c, f.w, wts.lstm_bwd, true, hs);
            for (i64 x = 0; x < f.w; ++x)
                for (i64 o = 0; o < wts.proj.c_out; ++o) {
                    double acc = wts.proj.bias[static_cast<size_t>(o)];
                    for (i64 j = 0; j < hid; ++j)
                        acc += wts.proj.at(o, j) * hs[static_cast<size_t>(x * hid + j)];
                    out.plane(bi, o)[y * f.w + x] = acc;
                }
        }
    return out;
}

FeatureMap concat_channels(const FeatureMap& a, const FeatureMap& b) {
    PIXAD_CHECK(a.b == b.b && a.h == b.h && a.w == b.w,
                "concat requires matching batch and spatial dims");
    FeatureMap out(a.b, a.c + b.c, a.h, a.w);
    for (i64 bi = 0; bi < a.b; ++bi) {
        for (i64 ci = 0; ci < a.c; ++ci)
            std::copy(a.plane(bi, ci), a.plane(bi, ci) + a.n(), out.plane(bi, ci));
        for (i64 ci = 0; ci < b.c; ++ci)
            std::copy(b.plane(bi, ci), b.plane(bi, ci) + b.n(), out.plane(bi, a.c + ci));
    }
    return out;
}

FeatureMap msrb_forward(const FeatureMap& i_lr, const FeatureMap* h_t,
                        const MsrbWeights& wts) {
    const i64 c_t = h_t ? h_t->c : 0;
    if (h_t)
        PIXAD_CHECK(h_t->b == i_lr.b && h_t->h == i_lr.h && h_t->w == i_lr.w,
                    "clue map batch/spatial dims must match");
    wts.validate(i_lr.c, c_t, i_lr.h, i_lr.w);
    FeatureMap x = mlp_ffn(madm(i_lr, wts), wts);
    if (h_t) x = concat_channels(x, *h_t);
    return blstm_forward(x, wts);
}

FeatureMap msrb_stack(const FeatureMap& i_lr, const FeatureMap* h_t,
                      const std::vector<MsrbWeights>& layers) {
    PIXAD_CHECK(!layers.empty(), "msrb stack needs at least one layer");
    FeatureMap out = msrb_forward(i_lr, h_t, layers[0]);
    for (size_t l = 1; l < layers.size(); ++l) out = msrb_forward(out, h_t, layers[l]);
    return out;
}

namespace {

// Serialization order; the manifest lists exactly these, in this order.
std::vector<std::pair<const char*, std::vector<double>*>> tensor_list(MsrbWeights& m) {
    return {
        {"axial_h", &m.axial_h.m},
        {"axial_w", &m.axial_w.m},
        {"channel_fc_w", &m.channel_fc.w},
        {"channel_fc_b", &m.channel_fc.bias},
        {"phase_fc_w", &m.phase_fc.w},
        {"phase_fc_b", &m.phase_fc.bias},
        {"amp_t_h", &m.amp_t_h.m},
        {"amp_t_w", &m.amp_t_w.m},
        {"amp_i_h", &m.amp_i_h.m},
        {"amp_i_w", &m.amp_i_w.m},
        {"fusion_fc1_w", &m.fusion_mlp.fc1.w},
        {"fusion_fc1_b", &m.fusion_mlp.fc1.bias},
        {"fusion_fc2_w", &m.fusion_mlp.fc2.w},
        {"fusion_fc2_b", &m.fusion_mlp.fc2.bias},
        {"ffn_fc1_w", &m.ffn.fc1.w},
        {"ffn_fc1_b", &m.ffn.fc1.bias},
        {"ffn_fc2_w", &m.ffn.fc2.w},
        {"ffn_fc2_b", &m.ffn.fc2.bias},
        {"lstm_fwd_w_ih", &m.lstm_fwd.w_ih},
        {"lstm_fwd_w_hh", &m.lstm_fwd.w_hh},
        {"lstm_fwd_b", &m.lstm_fwd.b},
        {"lstm_bwd_w_ih", &m.lstm_bwd.w_ih},
        {"lstm_bwd_w_hh", &m.lstm_bwd.w_hh},
        {"lstm_bwd_b", &m.lstm_bwd.b},
        {"proj_w", &m.proj.w},
        {"proj_b", &m.proj.bias},
    };
}

}  // namespace

void save_msrb_weights(const MsrbWeights& w, std::ostream& os) {
    const i64 c = w.channel_fc.c_out;
    const i64 c_t = w.lstm_fwd.in_dim - c;
    const i64 h = w.axial_h.dim, wid = w.axial_w.dim, hid = w.lstm_fwd.hidden;
    w.validate(c, c_t, h, wid);
    os << "pixad-msrb 1\n"
       << "dims " << c << " " << c_t << " " << h << " " << wid << " " << hid << "\n";
    auto tensors = tensor_list(const_cast<MsrbWeights&>(w));  // read-only use
    for (const auto& t : tensors) os << t.first << " " << t.second->size() << "\n";
    os << "data\n";
    for (const auto& t : tensors)
        for (double v : *t.second) detail::put_f64_le(os, v);
}

MsrbWeights load_msrb_weights(std::istream& is) {
    std::string magic;
    int version = 0;
    is >> magic >> version;
    PIXAD_CHECK(is && magic == "pixad-msrb" && version == 1, "bad msrb weight header");
    std::string tag;
    i64 c = 0, c_t = 0, h = 0, w = 0, hid = 0;
    is >> tag >> c >> c_t >> h >> w >> hid;
    PIXAD_CHECK(is && tag == "dims", "bad msrb dims line");
    MsrbWeights m = MsrbWeights::zeros(c, c_t, h, w, hid);
    auto tensors = tensor_list(m);
    for (const auto& t : tensors) {
        std::string got;
        size_t count = 0;
        is >> got >> count;
        PIXAD_CHECK(is && got == t.first && count == t.second->size(),
                    "msrb manifest mismatch at " + std::string(t.first));
    }
    is >> tag;
    PIXAD_CHECK(is && tag == "data", "missing msrb data section");
    is.get();  // the newline before the raw payload
    for (const auto& t : tensors)
        for (double& v : *t.second) v = detail::get_f64_le(is);
    return m;
}

}  // namespace pixad
