#pragma once

#include <string>
#include <vector>

#include "pixad/bench.hpp"

namespace pixad {

// Two log-log panels (median wall time and peak bytes vs resolution), one
// polyline + point markers per kernel, fixed palette and formatting: identical
// input bytes produce identical SVG bytes. Header-only records draw empty axes.
std::string render_bench_svg(const std::vector<BenchRecord>& records);

}  // namespace pixad
