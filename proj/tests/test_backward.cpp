#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pixad/attention.hpp"

using namespace pixad;

namespace {

double loss(const FeatureMap& f, const PamWeights& wts, const WindowConfig& cfg,
            const FeatureMap& up) {
    const FeatureMap out = pam_forward(f, wts, cfg).out;
    double acc = 0.0;
    for (size_t i = 0; i < out.data.size(); ++i) acc += up.data[i] * out.data[i];
    return acc;
}

double fd(double& coord, const FeatureMap& f, const PamWeights& wts,
          const WindowConfig& cfg, const FeatureMap& up, double eps = 1e-6) {
    const double saved = coord;
    coord = saved + eps;
    const double lp = loss(f, wts, cfg, up);
    coord = saved - eps;
    const double lm = loss(f, wts, cfg, up);
    coord = saved;
    return (lp - lm) / (2.0 * eps);
}

}  // namespace

TEST_CASE("zero upstream produces zero gradients") {
    const FeatureMap f = random_map<double>(1, 1, 3, 4, 4);
    const PamWeights wts = PamWeights::random(2, 3, true);
    const FeatureMap zero(1, 3, 4, 4);
    const PamGradients g = pam_backward(f, wts, WindowConfig{3}, zero);
    for (double v : g.d_input.data) CHECK(v == 0.0);
    for (double v : g.d_theta.w) CHECK(v == 0.0);
    for (double v : g.d_theta.bias) CHECK(v == 0.0);
    for (double v : g.d_phi.w) CHECK(v == 0.0);
    for (double v : g.d_omega.w) CHECK(v == 0.0);
}

TEST_CASE("k=1: constant attention kills theta/phi gradients") {
    const FeatureMap f = random_map<double>(3, 1, 2, 4, 5);
    const PamWeights wts = PamWeights::random(4, 2, true);
    const FeatureMap up = random_map<double>(5, 1, 2, 4, 5);
    const PamGradients g = pam_backward(f, wts, WindowConfig{1}, up);
    for (double v : g.d_theta.w) CHECK(v == 0.0);
    for (double v : g.d_theta.bias) CHECK(v == 0.0);
    for (double v : g.d_phi.w) CHECK(v == 0.0);
    for (double v : g.d_phi.bias) CHECK(v == 0.0);

    // out = omega(f), so d_input = omega^T up and d_omega = up f^T exactly.
    for (i64 ci = 0; ci < 2; ++ci)
        for (i64 i = 0; i < 20; ++i) {
            double acc = 0.0;
            for (i64 o = 0; o < 2; ++o)
                acc += wts.omega.at(o, ci) * up.plane(0, o)[i];
            CHECK(g.d_input.plane(0, ci)[i] == doctest::Approx(acc).epsilon(1e-14));
        }
    for (i64 o = 0; o < 2; ++o) {
        double acc = 0.0;
        for (i64 i = 0; i < 20; ++i) acc += up.plane(0, o)[i];
        CHECK(g.d_omega.bias[o] == doctest::Approx(acc).epsilon(1e-14));
    }
}

TEST_CASE("finite differences confirm every gradient block") {
    FeatureMap f = random_map<double>(6, 1, 2, 4, 4);
    PamWeights wts = PamWeights::random(7, 2, true);
    const FeatureMap up = random_map<double>(8, 1, 2, 4, 4);
    const WindowConfig cfg{3};
    const PamGradients g = pam_backward(f, wts, cfg, up);

    auto rel = [](double a, double n) {
        return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-8});
    };
    // Spot-check a spread of coordinates from every block, biases included.
    for (size_t i : {0u, 7u, 13u, 31u})
        CHECK(rel(g.d_input.data[i], fd(f.data[i], f, wts, cfg, up)) < 1e-7);
    for (size_t i : {0u, 1u, 2u, 3u}) {
        CHECK(rel(g.d_theta.w[i], fd(wts.theta.w[i], f, wts, cfg, up)) < 1e-7);
        CHECK(rel(g.d_phi.w[i], fd(wts.phi.w[i], f, wts, cfg, up)) < 1e-7);
        CHECK(rel(g.d_omega.w[i], fd(wts.omega.w[i], f, wts, cfg, up)) < 1e-7);
    }
    for (size_t i : {0u, 1u}) {
        CHECK(rel(g.d_theta.bias[i], fd(wts.theta.bias[i], f, wts, cfg, up)) < 1e-7);
        CHECK(rel(g.d_phi.bias[i], fd(wts.phi.bias[i], f, wts, cfg, up)) < 1e-7);
        CHECK(rel(g.d_omega.bias[i], fd(wts.omega.bias[i], f, wts, cfg, up)) < 1e-7);
    }
}

TEST_CASE("gradients are linear in the upstream") {
    const FeatureMap f = random_map<double>(9, 1, 2, 3, 5);
    const PamWeights wts = PamWeights::random(10, 2);
    const WindowConfig cfg{3};
    const FeatureMap u1 = random_map<double>(11, 1, 2, 3, 5);
    const FeatureMap u2 = random_map<double>(12, 1, 2, 3, 5);
    FeatureMap usum(1, 2, 3, 5);
    for (size_t i = 0; i < usum.data.size(); ++i)
        usum.data[i] = u1.data[i] + u2.data[i];
    const PamGradients g1 = pam_backward(f, wts, cfg, u1);
    const PamGradients g2 = pam_backward(f, wts, cfg, u2);
    const PamGradients gs = pam_backward(f, wts, cfg, usum);
    for (size_t i = 0; i < gs.d_input.data.size(); ++i)
        CHECK(gs.d_input.data[i] ==
              doctest::Approx(g1.d_input.data[i] + g2.d_input.data[i]).epsilon(1e-12));
    for (size_t i = 0; i < gs.d_theta.w.size(); ++i)
        CHECK(gs.d_theta.w[i] ==
              doctest::Approx(g1.d_theta.w[i] + g2.d_theta.w[i]).epsilon(1e-12));
}

TEST_CASE("upstream shape must match the output") {
    const FeatureMap f(1, 2, 4, 4);
    const PamWeights wts = PamWeights::random(13, 2);
    CHECK_THROWS(pam_backward(f, wts, WindowConfig{3}, FeatureMap(1, 2, 4, 5)));
    CHECK_THROWS(pam_backward(f, wts, WindowConfig{3}, FeatureMap(1, 3, 4, 4)));
    CHECK_THROWS(pam_backward(f, wts, WindowConfig{3}, FeatureMap(2, 2, 4, 4)));
}
