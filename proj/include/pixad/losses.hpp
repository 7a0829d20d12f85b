#pragma once

#include "pixad/hog.hpp"

namespace pixad {

enum class PixReduction { Norm, Mean };

// L1 distance between the HOG descriptors of two same-shaped images.
double lca_loss(const FeatureMap& hr, const FeatureMap& sr, const HogParams& params = {});

// Norm: l2 norm of the elementwise difference. Mean: mean squared difference.
double pix_loss(const FeatureMap& hr, const FeatureMap& sr,
                PixReduction reduction = PixReduction::Norm);

// pix_loss + lca_weight * lca_loss; lca_weight >= 0 (default 0.1).
double ir_loss(const FeatureMap& hr, const FeatureMap& sr, const HogParams& params = {},
               double lca_weight = 0.1);

}  // namespace pixad
