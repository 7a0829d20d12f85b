#pragma once

#include <iosfwd>
#include <optional>

#include "pixad/tensor.hpp"

namespace pixad {

enum class HogBinning { Count, Magnitude };

struct HogParams {
    i64 cell_size = 8;
    i64 n_bins = 9;
    HogBinning binning = HogBinning::Count;
    std::optional<double> gamma = 0.5;  // power-law correction; nullopt disables
    double epsilon = 1e-6;              // standardization stabilizer

    void validate() const {
        PIXAD_CHECK(cell_size >= 1, "cell_size must be >= 1");
        PIXAD_CHECK(n_bins >= 1, "n_bins must be >= 1");
        if (gamma) PIXAD_CHECK(*gamma > 0.0, "gamma must be > 0");
        PIXAD_CHECK(epsilon >= 0.0, "epsilon must be >= 0");
    }
};

// Per-pixel gradient field of a single-channel image.
struct GradientField {
    i64 h = 0, w = 0;
    std::vector<double> gx, gy;         // central differences, clamped borders
    std::vector<double> magnitude;      // sqrt(gx^2 + gy^2)
    std::vector<double> direction;      // atan2 mod pi, in [0, pi); 0 where mag == 0
};

struct HogDescriptor {
    i64 cells_y = 0, cells_x = 0, n_bins = 0;
    std::vector<double> values;  // [cells_y, cells_x, n_bins]

    double* cell(i64 cy, i64 cx) { return values.data() + (cy * cells_x + cx) * n_bins; }
    const double* cell(i64 cy, i64 cx) const {
        return values.data() + (cy * cells_x + cx) * n_bins;
    }
};

// Channel mean -> [b, 1, h, w].
FeatureMap to_grayscale(const FeatureMap& f);

// b == 1, c == 1 required; h, w >= 2.
GradientField image_gradients(const FeatureMap& gray);

// Raw per-cell histograms over complete cells only (partial border cells are
// dropped); zero-magnitude pixels are skipped in both binning modes.
HogDescriptor orientation_histograms(const GradientField& gf, const HogParams& params);

// Per-cell L2 standardization: block /= sqrt(|block|^2 + eps^2); all-zero
// blocks stay zero even at eps = 0.
void normalize_descriptor(HogDescriptor& d, double eps = 1e-6);

// Full pipeline: grayscale -> clamp >= 0 -> gamma -> gradients -> histograms
// -> per-cell standardization. b == 1 required.
HogDescriptor hog(const FeatureMap& img, const HogParams& params = {});

// Text dump: "cells_y cells_x n_bins" header then one line per cell.
void dump_descriptor(const HogDescriptor& d, std::ostream& os);

}  // namespace pixad
