#pragma once

#include <iosfwd>
#include <string>

#include "pixad/tensor.hpp"

namespace pixad {

// Plain (ASCII) PGM, magic P2, maxval 255, '#' comment lines allowed.
struct PgmImage {
    i64 h = 0, w = 0;
    std::vector<int> pixels;  // row-major, 0..255
};

PgmImage read_pgm(std::istream& is);
PgmImage read_pgm_file(const std::string& path);
void write_pgm(const PgmImage& img, std::ostream& os);
void write_pgm_file(const PgmImage& img, const std::string& path);

// Values scaled to [0, 1].
FeatureMap pgm_to_map(const PgmImage& img);

// Channel mean, then per-image affine rescale to [0, 255] (constant images
// write 0), rounded to nearest.
PgmImage map_to_pgm(const FeatureMap& f);

}  // namespace pixad
