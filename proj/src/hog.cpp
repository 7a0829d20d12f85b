#include "pixad/hog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace pixad {

FeatureMap to_grayscale(const FeatureMap& f) {
    FeatureMap g(f.b, 1, f.h, f.w);
    const i64 n = f.n();
    for (i64 bi = 0; bi < f.b; ++bi) {
        double* dst = g.plane(bi, 0);
        for (i64 i = 0; i < n; ++i) {
            double acc = 0.0;
            for (i64 ci = 0; ci < f.c; ++ci) acc += f.plane(bi, ci)[i];
            dst[i] = acc / static_cast<double>(f.c);
        }
    }
    return g;
}

GradientField image_gradients(const FeatureMap& gray) {
    PIXAD_CHECK(gray.b == 1 && gray.c == 1, "gradients expect a single gray image");
    PIXAD_CHECK(gray.h >= 2 && gray.w >= 2, "image must be at least 2x2");
    const i64 h = gray.h, w = gray.w;
    const double* img = gray.plane(0, 0);
    GradientField gf;
    gf.h = h;
    gf.w = w;
    gf.gx.resize(static_cast<size_t>(h * w));
    gf.gy.resize(static_cast<size_t>(h * w));
    gf.magnitude.resize(static_cast<size_t>(h * w));
    gf.direction.resize(static_cast<size_t>(h * w));
    const double pi = std::acos(-1.0);
    for (i64 y = 0; y < h; ++y)
        for (i64 x = 0; x < w; ++x) {
            const size_t i = static_cast<size_t>(y * w + x);
            const i64 xl = std::max<i64>(0, x - 1), xr = std::min<i64>(w - 1, x + 1);
            const i64 yu = std::max<i64>(0, y - 1), yd = std::min<i64>(h - 1, y + 1);
            const double gx = (img[y * w + xr] - img[y * w + xl]) / 2.0;
            const double gy = (img[yd * w + x] - img[yu * w + x]) / 2.0;
            gf.gx[i] = gx;
            gf.gy[i] = gy;
            gf.magnitude[i] = std::sqrt(gx * gx + gy * gy);
            double d = std::atan2(gy, gx);
            if (d < 0.0) d += pi;
            if (d >= pi) d -= pi;  // atan2(0, negative) lands on pi
            gf.direction[i] = d;
        }
    return gf;
}

HogDescriptor orientation_histograms(const GradientField& gf, const HogParams& params) {
    params.validate();
    HogDescriptor d;
    d.cells_y = gf.h / params.cell_size;  // trailing partial cells dropped
    d.cells_x = gf.w / params.cell_size;
    d.n_bins = params.n_bins;
    d.values.assign(static_cast<size_t>(d.cells_y * d.cells_x * d.n_bins), 0.0);
    const double pi = std::acos(-1.0);
    const double bin_width = pi / static_cast<double>(params.n_bins);
    for (i64 cy = 0; cy < d.cells_y; ++cy)
        for (i64 cx = 0; cx < d.cells_x; ++cx) {
            double* block = d.cell(cy, cx);
            for (i64 py = cy * params.cell_size; py < (cy + 1) * params.cell_size; ++py)
                for (i64 px = cx * params.cell_size; px < (cx + 1) * params.cell_size;
                     ++px) {
                    const size_t i = static_cast<size_t>(py * gf.w + px);
                    if (!(gf.magnitude[i] > 0.0)) continue;
                    i64 bin = static_cast<i64>(gf.direction[i] / bin_width);
                    if (bin >= params.n_bins) bin = params.n_bins - 1;
                    block[bin] +=
                        params.binning == HogBinning::Count ? 1.0 : gf.magnitude[i];
                }
        }
    return d;
}

void normalize_descriptor(HogDescriptor& d, double eps) {
    PIXAD_CHECK(eps >= 0.0, "epsilon must be >= 0");
    for (i64 cy = 0; cy < d.cells_y; ++cy)
        for (i64 cx = 0; cx < d.cells_x; ++cx) {
            double* block = d.cell(cy, cx);
            double ss = 0.0;
            for (i64 bi = 0; bi < d.n_bins; ++bi) ss += block[bi] * block[bi];
            const double denom_sq = ss + eps * eps;
            if (denom_sq == 0.0) continue;  // zero block stays zero
            const double denom = std::sqrt(denom_sq);
            for (i64 bi = 0; bi < d.n_bins; ++bi) block[bi] /= denom;
        }
}

HogDescriptor hog(const FeatureMap& img, const HogParams& params) {
    params.validate();
    PIXAD_CHECK(img.b == 1, "hog expects a single image");
    FeatureMap gray = to_grayscale(img);
    if (params.gamma)
        for (auto& v : gray.data) v = std::pow(std::max(v, 0.0), *params.gamma);
    GradientField gf = image_gradients(gray);
    HogDescriptor d = orientation_histograms(gf, params);
    normalize_descriptor(d, params.epsilon);
    return d;
}

void dump_descriptor(const HogDescriptor& d, std::ostream& os) {
    os << d.cells_y << " " << d.cells_x << " " << d.n_bins << "\n";
    char buf[40];
    for (i64 cy = 0; cy < d.cells_y; ++cy)
        for (i64 cx = 0; cx < d.cells_x; ++cx) {
            const double* block = d.cell(cy, cx);
            for (i64 bi = 0; bi < d.n_bins; ++bi) {
                std::snprintf(buf, sizeof(buf), "%.17g", block[bi]);
                os << (bi ? " " : "") << buf;
            }
            os << "\n";
        }
}

}  // namespace pixad
