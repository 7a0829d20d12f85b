#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pixad/msrb.hpp"

using namespace pixad;

namespace {

FeatureMap add_maps(const FeatureMap& a, const FeatureMap& b) {
    FeatureMap out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    return out;
}

FeatureMap gelu_map(const FeatureMap& f) {
    FeatureMap out = f;
    for (auto& v : out.data) v = gelu(v);
    return out;
}

}  // namespace

TEST_CASE("gelu: frozen values") {
    CHECK(gelu(0.0) == 0.0);
    CHECK(gelu(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-15));
    CHECK(gelu(-1.0) == doctest::Approx(-0.15865525393145707).epsilon(1e-15));
    CHECK(gelu(10.0) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(std::abs(gelu(-10.0)) < 1e-14);
    // gelu(x) - gelu(-x) == x exactly in math; check to fp tolerance.
    for (double x : {0.3, 1.7, 2.9})
        CHECK(gelu(x) - gelu(-x) == doctest::Approx(x).epsilon(1e-14));
}

TEST_CASE("axial_fc: identity matrix is a bitwise no-op") {
    const FeatureMap f = random_map<double>(1, 2, 3, 4, 5);
    CHECK(axial_fc(f, Axis::Height, AxialMatrix::identity(4)) == f);
    CHECK(axial_fc(f, Axis::Width, AxialMatrix::identity(5)) == f);
}

TEST_CASE("axial_fc: all-ones row mixes to the axis sum") {
    const FeatureMap f = random_map<double>(2, 1, 1, 3, 4);
    AxialMatrix ones(3);
    for (auto& v : ones.m) v = 1.0;
    const FeatureMap out = axial_fc(f, Axis::Height, ones);
    for (i64 x = 0; x < 4; ++x) {
        double s = 0.0;
        for (i64 y = 0; y < 3; ++y) s += f.at(0, 0, y, x);
        for (i64 y = 0; y < 3; ++y)
            CHECK(out.at(0, 0, y, x) == doctest::Approx(s).epsilon(1e-14));
    }
}

TEST_CASE("axial_fc: hand-computed matvec, both axes") {
    FeatureMap f(1, 1, 2, 3);
    const double vals[6] = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    for (i64 i = 0; i < 6; ++i) f.data[static_cast<size_t>(i)] = vals[i];
    AxialMatrix mh(2);
    mh.at(0, 0) = 1.0; mh.at(0, 1) = 2.0;
    mh.at(1, 0) = -1.0; mh.at(1, 1) = 0.5;
    const FeatureMap oh = axial_fc(f, Axis::Height, mh);
    // out[y][x] = sum_r mh[y][r] * f[r][x]
    CHECK(oh.at(0, 0, 0, 0) == 1.0 * 1.0 + 2.0 * 4.0);
    CHECK(oh.at(0, 0, 1, 2) == -1.0 * 3.0 + 0.5 * 6.0);

    AxialMatrix mw(3);
    mw.at(0, 2) = 1.0; mw.at(1, 1) = 2.0; mw.at(2, 0) = 3.0;
    const FeatureMap ow = axial_fc(f, Axis::Width, mw);
    CHECK(ow.at(0, 0, 0, 0) == 3.0);   // picks column 2
    CHECK(ow.at(0, 0, 0, 1) == 4.0);   // 2 * column 1
    CHECK(ow.at(0, 0, 1, 2) == 12.0);  // 3 * column 0
}

TEST_CASE("patm_fuse: zero phase collapses to the cos branch exactly") {
    const i64 c = 3, h = 4, w = 5;
    const FeatureMap f = random_map<double>(10, 1, c, h, w);
    MsrbWeights wts = MsrbWeights::random(11, c, 0, h, w, c);
    wts.phase_fc = LinearWeights(c, c);  // theta == 0 everywhere

    const FeatureMap z = pointwise_linear(f, wts.channel_fc);
    const FeatureMap mixed = add_maps(axial_fc(z, Axis::Height, wts.amp_t_h),
                                      axial_fc(z, Axis::Width, wts.amp_t_w));
    const FeatureMap want =
        pointwise_linear(gelu_map(pointwise_linear(mixed, wts.fusion_mlp.fc1)),
                         wts.fusion_mlp.fc2);
    CHECK(patm_fuse(f, wts) == want);
}

TEST_CASE("patm_fuse: transcription oracle on a tiny case") {
    const i64 c = 2, h = 2, w = 3;
    const FeatureMap f = random_map<double>(12, 1, c, h, w);
    const MsrbWeights wts = MsrbWeights::random(13, c, 0, h, w, c);
    const FeatureMap got = patm_fuse(f, wts);

    // Straight-line reimplementation with plain loops.
    auto lin = [&](const FeatureMap& in, const LinearWeights& lw) {
        FeatureMap out(1, lw.c_out, h, w);
        for (i64 o = 0; o < lw.c_out; ++o)
            for (i64 i = 0; i < h * w; ++i) {
                double acc = lw.bias[static_cast<size_t>(o)];
                for (i64 ci = 0; ci < lw.c_in; ++ci)
                    acc += lw.at(o, ci) * in.plane(0, ci)[i];
                out.plane(0, o)[i] = acc;
            }
        return out;
    };
    const FeatureMap z = lin(f, wts.channel_fc);
    const FeatureMap th = lin(f, wts.phase_fc);
    FeatureMap mixed(1, c, h, w);
    for (i64 ci = 0; ci < c; ++ci)
        for (i64 y = 0; y < h; ++y)
            for (i64 x = 0; x < w; ++x) {
                double bh_t = 0.0, bh_i = 0.0, bw_t = 0.0, bw_i = 0.0;
                for (i64 r = 0; r < h; ++r) {
                    bh_t += wts.amp_t_h.at(y, r) * z.at(0, ci, r, x) *
                            std::cos(th.at(0, ci, r, x));
                    bh_i += wts.amp_i_h.at(y, r) * z.at(0, ci, r, x) *
                            std::sin(th.at(0, ci, r, x));
                }
                for (i64 r = 0; r < w; ++r) {
                    bw_t += wts.amp_t_w.at(x, r) * z.at(0, ci, y, r) *
                            std::cos(th.at(0, ci, y, r));
                    bw_i += wts.amp_i_w.at(x, r) * z.at(0, ci, y, r) *
                            std::sin(th.at(0, ci, y, r));
                }
                mixed.at(0, ci, y, x) = bh_t + bh_i + bw_t + bw_i;
            }
    FeatureMap mid = lin(mixed, wts.fusion_mlp.fc1);
    for (auto& v : mid.data) v = 0.5 * v * (1.0 + std::erf(v / std::sqrt(2.0)));
    const FeatureMap want = lin(mid, wts.fusion_mlp.fc2);
    for (size_t i = 0; i < want.data.size(); ++i)
        CHECK(got.data[i] == doctest::Approx(want.data[i]).epsilon(1e-12));
}

TEST_CASE("madm: zero weights make it the identity, bitwise") {
    const FeatureMap f = random_map<double>(14, 2, 3, 4, 4);
    const MsrbWeights wts = MsrbWeights::zeros(3, 0, 4, 4, 3);
    CHECK(madm(f, wts) == f);
}

TEST_CASE("madm: composed from public pieces") {
    const i64 c = 2, h = 3, w = 4;
    const FeatureMap f = random_map<double>(15, 1, c, h, w);
    const MsrbWeights wts = MsrbWeights::random(16, c, 0, h, w, c);
    const FeatureMap mixed =
        add_maps(add_maps(axial_fc(f, Axis::Height, wts.axial_h),
                          axial_fc(f, Axis::Width, wts.axial_w)),
                 pointwise_linear(f, wts.channel_fc));
    const FeatureMap want = add_maps(f, patm_fuse(mixed, wts));
    CHECK(madm(f, wts) == want);
}

TEST_CASE("mlp_ffn: residual two-layer MLP") {
    const i64 c = 3, h = 2, w = 5;
    const FeatureMap f = random_map<double>(17, 1, c, h, w);
    const MsrbWeights wts = MsrbWeights::random(18, c, 0, h, w, c);
    const FeatureMap want = add_maps(
        f, pointwise_linear(gelu_map(pointwise_linear(f, wts.ffn.fc1)), wts.ffn.fc2));
    CHECK(mlp_ffn(f, wts) == want);

    const MsrbWeights zero = MsrbWeights::zeros(c, 0, h, w, c);
    CHECK(mlp_ffn(f, zero) == f);
}

TEST_CASE("blstm: zero weights project to the bias map") {
    const i64 c = 2, h = 3, w = 4, hidden = 3;
    const FeatureMap f = random_map<double>(19, 1, c, h, w);
    MsrbWeights wts = MsrbWeights::zeros(c, 0, h, w, hidden);
    wts.proj.bias[0] = 1.5;
    wts.proj.bias[1] = -2.5;
    const FeatureMap out = blstm_forward(f, wts);
    for (i64 i = 0; i < h * w; ++i) {
        CHECK(out.plane(0, 0)[i] == 1.5);
        CHECK(out.plane(0, 1)[i] == -2.5);
    }
}

TEST_CASE("blstm: single-cell sequence matches a hand-rolled lstm step") {
    // c = 1, w = 1, hidden = 1: both directions see the same single step.
    MsrbWeights wts = MsrbWeights::zeros(1, 0, 1, 1, 1);
    const double wi = 0.7, wf = -0.3, wg = 1.1, wo = 0.4;
    const double bi = 0.05, bf = 0.1, bg = -0.2, bo = 0.3;
    for (int gate = 0; gate < 4; ++gate) {
        const double wv[4] = {wi, wf, wg, wo};
        const double bv[4] = {bi, bf, bg, bo};
        wts.lstm_fwd.w_ih[static_cast<size_t>(gate)] = wv[gate];
        wts.lstm_fwd.b[static_cast<size_t>(gate)] = bv[gate];
        wts.lstm_bwd.w_ih[static_cast<size_t>(gate)] = wv[gate];
        wts.lstm_bwd.b[static_cast<size_t>(gate)] = bv[gate];
    }
    wts.proj.w[0] = 2.0;
    wts.proj.bias[0] = 0.25;

    FeatureMap f(1, 1, 1, 1);
    f.data[0] = 0.6;
    const FeatureMap out = blstm_forward(f, wts);

    auto sig = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
    const double x = 0.6;
    const double ig = sig(bi + wi * x);
    const double fg = sig(bf + wf * x);
    (void)fg;  // initial cell is zero, so the forget gate is inert here
    const double gg = std::tanh(bg + wg * x);
    const double og = sig(bo + wo * x);
    const double hstep = og * std::tanh(ig * gg);
    const double want = 0.25 + 2.0 * (hstep + hstep);
    CHECK(out.data[0] == doctest::Approx(want).epsilon(1e-15));
}

TEST_CASE("blstm: swapping directions mirrors a reversed input") {
    const i64 c = 2, h = 2, w = 5, hidden = 3;
    const FeatureMap f = random_map<double>(20, 1, c, h, w);
    MsrbWeights wts = MsrbWeights::random(21, c, 0, h, w, hidden);
    MsrbWeights swapped = wts;
    std::swap(swapped.lstm_fwd, swapped.lstm_bwd);

    FeatureMap rev(1, c, h, w);
    for (i64 ci = 0; ci < c; ++ci)
        for (i64 y = 0; y < h; ++y)
            for (i64 x = 0; x < w; ++x)
                rev.at(0, ci, y, x) = f.at(0, ci, y, w - 1 - x);

    const FeatureMap a = blstm_forward(f, wts);
    const FeatureMap b = blstm_forward(rev, swapped);
    for (i64 ci = 0; ci < c; ++ci)
        for (i64 y = 0; y < h; ++y)
            for (i64 x = 0; x < w; ++x)
                CHECK(a.at(0, ci, y, x) == b.at(0, ci, y, w - 1 - x));
}

TEST_CASE("concat_channels") {
    const FeatureMap a = random_map<double>(22, 2, 3, 4, 5);
    const FeatureMap b = random_map<double>(23, 2, 2, 4, 5);
    const FeatureMap cat = concat_channels(a, b);
    CHECK(cat.c == 5);
    for (i64 bi = 0; bi < 2; ++bi) {
        for (i64 ci = 0; ci < 3; ++ci)
            for (i64 i = 0; i < 20; ++i)
                CHECK(cat.plane(bi, ci)[i] == a.plane(bi, ci)[i]);
        for (i64 ci = 0; ci < 2; ++ci)
            for (i64 i = 0; i < 20; ++i)
                CHECK(cat.plane(bi, 3 + ci)[i] == b.plane(bi, ci)[i]);
    }
    CHECK_THROWS(concat_channels(a, random_map<double>(24, 2, 2, 4, 4)));
    CHECK_THROWS(concat_channels(a, random_map<double>(25, 1, 2, 4, 5)));
}

TEST_CASE("msrb_forward: shape and clue-free path") {
    const FeatureMap f = random_map<double>(26, 1, 8, 4, 10);
    const MsrbWeights wts = MsrbWeights::random(27, 8, 0, 4, 10, 6);
    const FeatureMap out = msrb_forward(f, nullptr, wts);
    CHECK(out.b == 1);
    CHECK(out.c == 8);
    CHECK(out.h == 4);
    CHECK(out.w == 10);
}

TEST_CASE("msrb_forward equals the public composition") {
    const i64 c = 4, c_t = 2, h = 3, w = 6;
    const FeatureMap f = random_map<double>(28, 2, c, h, w);
    const FeatureMap clue = random_map<double>(29, 2, c_t, h, w);
    const MsrbWeights wts = MsrbWeights::random(30, c, c_t, h, w, 5);
    const FeatureMap want =
        blstm_forward(concat_channels(mlp_ffn(madm(f, wts), wts), clue), wts);
    CHECK(msrb_forward(f, &clue, wts) == want);
}

TEST_CASE("msrb_forward: clue dims must match spatially") {
    const FeatureMap f = random_map<double>(31, 1, 3, 4, 4);
    const FeatureMap bad = random_map<double>(32, 1, 2, 4, 5);
    const MsrbWeights wts = MsrbWeights::random(33, 3, 2, 4, 4, 4);
    CHECK_THROWS(msrb_forward(f, &bad, wts));
    // Missing clue when the weights expect one.
    CHECK_THROWS(msrb_forward(f, nullptr, wts));
}

TEST_CASE("msrb_stack applies layers in order") {
    const i64 c = 3, h = 3, w = 4;
    const FeatureMap f = random_map<double>(34, 1, c, h, w);
    std::vector<MsrbWeights> layers;
    layers.push_back(MsrbWeights::random(35, c, 0, h, w, 4));
    layers.push_back(MsrbWeights::random(36, c, 0, h, w, 4));
    const FeatureMap two = msrb_stack(f, nullptr, layers);
    const FeatureMap manual =
        msrb_forward(msrb_forward(f, nullptr, layers[0]), nullptr, layers[1]);
    CHECK(two == manual);
    CHECK_THROWS_AS(msrb_stack(f, nullptr, {}), std::invalid_argument);
    CHECK(kDefaultMsrbLayers == 5);
}

TEST_CASE("weights round-trip through the stream format") {
    const MsrbWeights w = MsrbWeights::random(37, 3, 2, 4, 6, 5);
    std::stringstream ss;
    save_msrb_weights(w, ss);
    const MsrbWeights r = load_msrb_weights(ss);
    CHECK(r.axial_h.m == w.axial_h.m);
    CHECK(r.axial_w.m == w.axial_w.m);
    CHECK(r.channel_fc.w == w.channel_fc.w);
    CHECK(r.channel_fc.bias == w.channel_fc.bias);
    CHECK(r.phase_fc.w == w.phase_fc.w);
    CHECK(r.amp_t_h.m == w.amp_t_h.m);
    CHECK(r.amp_i_w.m == w.amp_i_w.m);
    CHECK(r.fusion_mlp.fc1.w == w.fusion_mlp.fc1.w);
    CHECK(r.fusion_mlp.fc2.bias == w.fusion_mlp.fc2.bias);
    CHECK(r.ffn.fc1.w == w.ffn.fc1.w);
    CHECK(r.lstm_fwd.w_ih == w.lstm_fwd.w_ih);
    CHECK(r.lstm_fwd.w_hh == w.lstm_fwd.w_hh);
    CHECK(r.lstm_bwd.b == w.lstm_bwd.b);
    CHECK(r.proj.w == w.proj.w);
    CHECK(r.proj.bias == w.proj.bias);
    r.validate(3, 2, 4, 6);

    std::stringstream bad("not a manifest\n");
    CHECK_THROWS(load_msrb_weights(bad));
}
