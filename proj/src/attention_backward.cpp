#include <algorithm>
#include <cmath>
#include <vector>

#include "pixad/attention.hpp"

namespace pixad {

// Adjoint of pam_forward for L = sum(upstream (*) out). Single-threaded scalar:
// this path backs the finite-difference check, not the benchmarks.
PamGradients pam_backward(const FeatureMap& f, const PamWeights& wts,
                          const WindowConfig& cfg, const FeatureMap& upstream) {
    wts.validate(f.c);
    cfg.validate();
    PIXAD_CHECK(cfg.k <= 2 * std::min(f.h, f.w) + 1,
                "window would exceed the zero-padded image");
    PIXAD_CHECK(upstream.b == f.b && upstream.c == f.c && upstream.h == f.h &&
                    upstream.w == f.w,
                "upstream gradient shape must match the pam output");

    const i64 b = f.b, c = f.c, h = f.h, w = f.w, n = h * w;
    const i64 k = cfg.k, p = cfg.pad(), k2 = k * k;
    const double inv_sqrt_c = 1.0 / std::sqrt(static_cast<double>(c));

    ExecOptions ref;
    ref.threads = 1;
    ref.isa = Isa::Scalar;
    FeatureMap q = pointwise_linear(f, wts.theta, ref);
    FeatureMap kk = pointwise_linear(f, wts.phi, ref);
    FeatureMap vv = pointwise_linear(f, wts.omega, ref);

    PamGradients g{FeatureMap(b, c, h, w), LinearWeights(c, c), LinearWeights(c, c),
                   LinearWeights(c, c)};

    std::vector<double> z(static_cast<size_t>(k2)), a(static_cast<size_t>(k2));
    std::vector<double> da(static_cast<size_t>(k2)), dz(static_cast<size_t>(k2));
    std::vector<i64> nb(static_cast<size_t>(k2));  // neighbor pixel or -1

    for (i64 bi = 0; bi < b; ++bi) {
        std::vector<double> dq(static_cast<size_t>(c * n), 0.0);
        std::vector<double> dkk(static_cast<size_t>(c * n), 0.0);
        std::vector<double> dvv(static_cast<size_t>(c * n), 0.0);

        for (i64 i = 0; i < n; ++i) {
            const i64 y = i / w, x = i % w;
            for (i64 t = 0; t < k2; ++t) {
                const i64 sy = y + t / k - p, sx = x + t % k - p;
                nb[static_cast<size_t>(t)] =
                    (sy >= 0 && sy < h && sx >= 0 && sx < w) ? sy * w + sx : -1;
            }

            // Recompute this pixel's attention row.
            for (i64 t = 0; t < k2; ++t) {
                double acc = 0.0;
                if (nb[static_cast<size_t>(t)] >= 0)
                    for (i64 ci = 0; ci < c; ++ci)
                        acc += q.plane(bi, ci)[i] *
                               kk.plane(bi, ci)[nb[static_cast<size_t>(t)]];
                z[static_cast<size_t>(t)] = acc * inv_sqrt_c;
            }
            double m = z[0];
            for (i64 t = 1; t < k2; ++t) m = std::max(m, z[static_cast<size_t>(t)]);
            double s = 0.0;
            for (i64 t = 0; t < k2; ++t) {
                a[static_cast<size_t>(t)] = std::exp(z[static_cast<size_t>(t)] - m);
                s += a[static_cast<size_t>(t)];
            }
            for (i64 t = 0; t < k2; ++t) a[static_cast<size_t>(t)] /= s;

            // d_a and the value-path scatter.
            for (i64 t = 0; t < k2; ++t) {
                const i64 j = nb[static_cast<size_t>(t)];
                double acc = 0.0;
                if (j >= 0)
                    for (i64 ci = 0; ci < c; ++ci) {
                        acc += upstream.plane(bi, ci)[i] * vv.plane(bi, ci)[j];
                        dvv[static_cast<size_t>(ci * n + j)] +=
                            upstream.plane(bi, ci)[i] * a[static_cast<size_t>(t)];
                    }
                da[static_cast<size_t>(t)] = acc;
            }

            // Softmax Jacobian: dz_t = a_t * (da_t - sum_u a_u da_u).
            double dot = 0.0;
            for (i64 t = 0; t < k2; ++t)
                dot += a[static_cast<size_t>(t)] * da[static_cast<size_t>(t)];
            for (i64 t = 0; t < k2; ++t)
                dz[static_cast<size_t>(t)] =
                    a[static_cast<size_t>(t)] * (da[static_cast<size_t>(t)] - dot);

            // Query/key paths through the scaled dot product.
            for (i64 t = 0; t < k2; ++t) {
                const i64 j = nb[static_cast<size_t>(t)];
                if (j < 0) continue;
                const double gz = dz[static_cast<size_t>(t)] * inv_sqrt_c;
                for (i64 ci = 0; ci < c; ++ci) {
                    dq[static_cast<size_t>(ci * n + i)] += gz * kk.plane(bi, ci)[j];
                    dkk[static_cast<size_t>(ci * n + j)] += gz * q.plane(bi, ci)[i];
                }
            }
        }

        // Pointwise-linear backward for each of the three transforms.
        for (i64 o = 0; o < c; ++o)
            for (i64 i = 0; i < n; ++i) {
                const double go = dq[static_cast<size_t>(o * n + i)];
                const double gk = dkk[static_cast<size_t>(o * n + i)];
                const double gv = dvv[static_cast<size_t>(o * n + i)];
                g.d_theta.bias[static_cast<size_t>(o)] += go;
                g.d_phi.bias[static_cast<size_t>(o)] += gk;
                g.d_omega.bias[static_cast<size_t>(o)] += gv;
                for (i64 ci = 0; ci < c; ++ci) {
                    const double fv = f.plane(bi, ci)[i];
                    g.d_theta.at(o, ci) += go * fv;
                    g.d_phi.at(o, ci) += gk * fv;
                    g.d_omega.at(o, ci) += gv * fv;
                    g.d_input.plane(bi, ci)[i] += wts.theta.at(o, ci) * go +
                                                  wts.phi.at(o, ci) * gk +
                                                  wts.omega.at(o, ci) * gv;
                }
            }
    }
    return g;
}

}  // namespace pixad
