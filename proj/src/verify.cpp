#include "pixad/verify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "pixad/hog.hpp"
#include "pixad/pixel_graph.hpp"

namespace pixad {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

double max_abs_diff(const FeatureMap& a, const FeatureMap& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

double max_rowsum_dev(const RelationTensor& rel) {
    double m = 0.0;
    for (i64 bi = 0; bi < rel.b; ++bi)
        for (i64 i = 0; i < rel.n; ++i) {
            const double* row = rel.row(bi, i);
            double s = 0.0;
            for (i64 t = 0; t < rel.k2; ++t) s += row[t];
            m = std::max(m, std::abs(s - 1.0));
        }
    return m;
}

// Fully independent straight-line HOG: own index math, own binning arithmetic,
// shares nothing with the library pipeline.
std::vector<double> hog_oracle(const FeatureMap& img, i64 cell, i64 bins) {
    const i64 h = img.h, w = img.w;
    const double pi = 3.14159265358979323846;
    std::vector<double> g(static_cast<size_t>(h * w));
    for (i64 i = 0; i < h * w; ++i) {
        double v = img.data[static_cast<size_t>(i)];
        if (v < 0.0) v = 0.0;
        g[static_cast<size_t>(i)] = std::sqrt(v);  // gamma 0.5
    }
    const i64 cy_n = h / cell, cx_n = w / cell;
    std::vector<double> hist(static_cast<size_t>(cy_n * cx_n * bins), 0.0);
    for (i64 y = 0; y < h; ++y)
        for (i64 x = 0; x < w; ++x) {
            const i64 cy = y / cell, cx = x / cell;
            if (cy >= cy_n || cx >= cx_n) continue;
            const i64 xl = x > 0 ? x - 1 : 0, xr = x < w - 1 ? x + 1 : w - 1;
            const i64 yu = y > 0 ? y - 1 : 0, yd = y < h - 1 ? y + 1 : h - 1;
            const double gx = (g[static_cast<size_t>(y * w + xr)] -
                               g[static_cast<size_t>(y * w + xl)]) * 0.5;
            const double gy = (g[static_cast<size_t>(yd * w + x)] -
                               g[static_cast<size_t>(yu * w + x)]) * 0.5;
            if (std::sqrt(gx * gx + gy * gy) <= 0.0) continue;
            double d = std::atan2(gy, gx);
            while (d < 0.0) d += pi;
            while (d >= pi) d -= pi;
            i64 bin = static_cast<i64>(std::floor(d * static_cast<double>(bins) / pi));
            if (bin > bins - 1) bin = bins - 1;
            hist[static_cast<size_t>((cy * cx_n + cx) * bins + bin)] += 1.0;
        }
    for (i64 c0 = 0; c0 < cy_n * cx_n; ++c0) {
        double ss = 1e-6 * 1e-6;
        for (i64 bi = 0; bi < bins; ++bi) {
            const double v = hist[static_cast<size_t>(c0 * bins + bi)];
            ss += v * v;
        }
        const double denom = std::sqrt(ss);
        for (i64 bi = 0; bi < bins; ++bi)
            hist[static_cast<size_t>(c0 * bins + bi)] /= denom;
    }
    return hist;
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& opts) {
    PIXAD_CHECK(opts.cases >= 0, "cases must be >= 0");
    VerifyReport rep;
    std::ostringstream os;
    os << "pixad verify: seed=" << opts.seed << " cases=" << opts.cases << "\n";
    bool all_pass = true;

    ExecOptions exec;
    exec.threads = opts.threads;
    exec.isa = opts.isa;

    if (opts.cases > 0) {
        const i64 c_choices[3] = {1, 4, 8};
        const i64 k_choices[3] = {1, 3, 5};
        SeededRng dims_rng(opts.seed);
        for (int idx = 0; idx < opts.cases; ++idx) {
            const i64 b = 1 + static_cast<i64>(dims_rng.next_below(2));
            const i64 c = c_choices[dims_rng.next_below(3)];
            const i64 h = 4 + static_cast<i64>(dims_rng.next_below(9));
            const i64 w = 4 + static_cast<i64>(dims_rng.next_below(9));
            const i64 k = k_choices[dims_rng.next_below(3)];
            const bool with_bias = idx % 4 == 0;
            const WindowConfig cfg{k};

            FeatureMap f = random_map<double>(opts.seed + 1000 + 7 * idx, b, c, h, w);
            PamWeights wts = PamWeights::random(opts.seed + 2000 + 7 * idx, c, with_bias);
            PamWeights oracle_wts = wts;
            oracle_wts.theta.at(0, 0) += opts.perturb;  // failure-injection hook

            PamResult fast = pam_forward(f, wts, cfg, exec);
            PgaGraph graph = build_pixel_graph(h, w, cfg);
            PamResult oracle = pga_reference(f, oracle_wts, graph);

            const double diff = max_abs_diff(fast.out, oracle.out);
            const double rowdev =
                std::max(max_rowsum_dev(fast.attention), max_rowsum_dev(oracle.attention));
            rep.max_abs_diff = std::max(rep.max_abs_diff, diff);
            rep.max_rowsum_dev = std::max(rep.max_rowsum_dev, rowdev);
            const bool ok = diff <= kVerifyTol && rowdev <= kRowSumTol;
            all_pass = all_pass && ok;
            ++rep.cases_run;

            char line[160];
            std::snprintf(line, sizeof(line),
                          "case %02d: b=%lld c=%lld h=%lld w=%lld k=%lld bias=%d "
                          "max|pam-pga|=%s rowsum_dev=%s %s\n",
                          idx, static_cast<long long>(b), static_cast<long long>(c),
                          static_cast<long long>(h), static_cast<long long>(w),
                          static_cast<long long>(k), with_bias ? 1 : 0,
                          sci(diff).c_str(), sci(rowdev).c_str(), ok ? "PASS" : "FAIL");
            os << line;
        }

        {
            // Degenerate tile: one block covering the image, no halo ring.
            FeatureMap f = random_map<double>(opts.seed + 9001, 1, 4, 6, 6);
            PamWeights wts = PamWeights::random(opts.seed + 9002, 4);
            FeatureMap ha = halo_attention(f, wts, 6, 0, exec);
            FeatureMap ga = global_attention(f, wts, exec);
            const double diff = max_abs_diff(ha, ga);
            const bool ok = diff <= kVerifyTol;
            all_pass = all_pass && ok;
            ++rep.cases_run;
            os << "halo-vs-global: b=1 c=4 h=6 w=6 block=6 halo=0 max|halo-global|="
               << sci(diff) << " " << (ok ? "PASS" : "FAIL") << "\n";
        }

        {
            FeatureMap img = random_map<double>(opts.seed + 9100, 1, 1, 16, 16);
            HogDescriptor lib = hog(img);  // defaults: cell 8, 9 bins, gamma 0.5
            std::vector<double> oracle = hog_oracle(img, 8, 9);
            double diff = 0.0;
            PIXAD_CHECK(lib.values.size() == oracle.size(), "hog layout mismatch");
            for (size_t i = 0; i < oracle.size(); ++i)
                diff = std::max(diff, std::abs(lib.values[i] - oracle[i]));
            const bool ok = diff <= kHogCrossTol;
            all_pass = all_pass && ok;
            ++rep.cases_run;
            os << "hog-crosscheck: 16x16 cell=8 bins=9 max|lib-oracle|=" << sci(diff)
               << " " << (ok ? "PASS" : "FAIL") << "\n";
        }
    }

    rep.pass = all_pass;
    os << "verify: " << (rep.pass ? "PASS" : "FAIL") << " (" << rep.cases_run
       << " checks, max|pam-pga|=" << sci(rep.max_abs_diff)
       << ", max_rowsum_dev=" << sci(rep.max_rowsum_dev) << ")\n";
    rep.text = os.str();
    return rep;
}

GradcheckReport run_gradcheck(const GradcheckOptions& opts) {
    PIXAD_CHECK(opts.eps > 0.0, "eps must be > 0");
    PIXAD_CHECK(opts.tol > 0.0, "tol must be > 0");
    const i64 b = 1, c = 3, h = 5, w = 5;
    const WindowConfig cfg{3};
    FeatureMap f = random_map<double>(opts.seed + 1, b, c, h, w);
    PamWeights wts = PamWeights::random(opts.seed + 2, c, true);
    FeatureMap upstream = random_map<double>(opts.seed + 3, b, c, h, w);

    const PamGradients analytic = pam_backward(f, wts, cfg, upstream);

    auto loss = [&]() {
        FeatureMap out = pam_forward(f, wts, cfg).out;
        double acc = 0.0;
        for (size_t i = 0; i < out.data.size(); ++i)
            acc += upstream.data[i] * out.data[i];
        return acc;
    };
    auto central = [&](double& coord) {
        const double saved = coord;
        coord = saved + opts.eps;
        const double lp = loss();
        coord = saved - opts.eps;
        const double lm = loss();
        coord = saved;
        return (lp - lm) / (2.0 * opts.eps);
    };
    auto rel_err = [](double a, double n) {
        return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-8});
    };

    GradcheckReport rep;
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof(line),
                  "pixad gradcheck: [1,3,5,5] k=3 seed=%llu eps=%s tol=%s\n",
                  static_cast<unsigned long long>(opts.seed), sci(opts.eps).c_str(),
                  sci(opts.tol).c_str());
    os << line;

    bool all_ok = true;
    auto check_coord = [&](const char* group, i64 index, double& coord,
                           double analytic_val) {
        const double numeric = central(coord);
        const double err = rel_err(analytic_val, numeric);
        rep.max_rel_err = std::max(rep.max_rel_err, err);
        ++rep.coords;
        if (err > opts.tol) {
            all_ok = false;
            std::snprintf(line, sizeof(line),
                          "  FAIL %s[%lld]: analytic=%s numeric=%s rel_err=%s\n", group,
                          static_cast<long long>(index), sci(analytic_val).c_str(),
                          sci(numeric).c_str(), sci(err).c_str());
            os << line;
        }
    };

    for (size_t i = 0; i < f.data.size(); ++i)
        check_coord("input", static_cast<i64>(i), f.data[i],
                    analytic.d_input.data[i]);
    auto check_linear = [&](const char* wname, const char* bname, LinearWeights& lw,
                            const LinearWeights& grad) {
        for (size_t i = 0; i < lw.w.size(); ++i)
            check_coord(wname, static_cast<i64>(i), lw.w[i], grad.w[i]);
        for (size_t i = 0; i < lw.bias.size(); ++i)
            check_coord(bname, static_cast<i64>(i), lw.bias[i], grad.bias[i]);
    };
    check_linear("theta.w", "theta.b", wts.theta, analytic.d_theta);
    check_linear("phi.w", "phi.b", wts.phi, analytic.d_phi);
    check_linear("omega.w", "omega.b", wts.omega, analytic.d_omega);

    rep.pass = all_ok;
    std::snprintf(line, sizeof(line), "gradcheck: %s (%d coords, max_rel_err=%s)\n",
                  rep.pass ? "PASS" : "FAIL", rep.coords, sci(rep.max_rel_err).c_str());
    os << line;
    rep.text = os.str();
    return rep;
}

}  // namespace pixad
