#include "pixad/losses.hpp"

#include <cmath>

namespace pixad {

namespace {

void check_same_dims(const FeatureMap& a, const FeatureMap& b) {
    PIXAD_CHECK(a.b == b.b && a.c == b.c && a.h == b.h && a.w == b.w,
                "loss inputs must share dims");
}

}  // namespace

double lca_loss(const FeatureMap& hr, const FeatureMap& sr, const HogParams& params) {
    check_same_dims(hr, sr);
    HogDescriptor dh = hog(hr, params);
    HogDescriptor ds = hog(sr, params);
    double acc = 0.0;
    for (size_t i = 0; i < dh.values.size(); ++i)
        acc += std::abs(dh.values[i] - ds.values[i]);
    return acc;
}

double pix_loss(const FeatureMap& hr, const FeatureMap& sr, PixReduction reduction) {
    check_same_dims(hr, sr);
    double ss = 0.0;
    for (size_t i = 0; i < hr.data.size(); ++i) {
        const double d = hr.data[i] - sr.data[i];
        ss += d * d;
    }
    if (reduction == PixReduction::Mean)
        return ss / static_cast<double>(hr.data.size());
    return std::sqrt(ss);
}

double ir_loss(const FeatureMap& hr, const FeatureMap& sr, const HogParams& params,
               double lca_weight) {
    PIXAD_CHECK(lca_weight >= 0.0, "lca_weight must be >= 0");
    return pix_loss(hr, sr) + lca_weight * lca_loss(hr, sr, params);
}

}  // namespace pixad
