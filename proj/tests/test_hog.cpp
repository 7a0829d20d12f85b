#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pixad/hog.hpp"

using namespace pixad;

namespace {

// Vertical step edge: left half dark, right half bright.
FeatureMap vertical_edge(i64 h, i64 w) {
    FeatureMap f(1, 1, h, w);
    for (i64 y = 0; y < h; ++y)
        for (i64 x = 0; x < w; ++x)
            f.at(0, 0, y, x) = x < w / 2 ? 0.0 : 1.0;
    return f;
}

FeatureMap scaled(const FeatureMap& f, double a) {
    FeatureMap out = f;
    for (auto& v : out.data) v *= a;
    return out;
}

}  // namespace

TEST_CASE("to_grayscale averages channels") {
    FeatureMap f(1, 3, 2, 2);
    for (i64 ci = 0; ci < 3; ++ci)
        for (i64 i = 0; i < 4; ++i)
            f.plane(0, ci)[i] = static_cast<double>(ci + 1);
    const FeatureMap g = to_grayscale(f);
    CHECK(g.c == 1);
    for (i64 i = 0; i < 4; ++i) CHECK(g.data[static_cast<size_t>(i)] == 2.0);
}

TEST_CASE("image_gradients: linear ramp has unit slope in the interior") {
    FeatureMap g(1, 1, 4, 6);
    for (i64 y = 0; y < 4; ++y)
        for (i64 x = 0; x < 6; ++x) g.at(0, 0, y, x) = static_cast<double>(x);
    const GradientField gf = image_gradients(g);
    for (i64 y = 0; y < 4; ++y) {
        // Central difference: interior 1, clamped borders 0.5.
        CHECK(gf.gx[static_cast<size_t>(y * 6 + 0)] == 0.5);
        CHECK(gf.gx[static_cast<size_t>(y * 6 + 3)] == 1.0);
        CHECK(gf.gx[static_cast<size_t>(y * 6 + 5)] == 0.5);
        CHECK(gf.gy[static_cast<size_t>(y * 6 + 2)] == 0.0);
    }
    // Pure horizontal gradient: direction 0 everywhere it is defined.
    for (size_t i = 0; i < gf.direction.size(); ++i)
        CHECK(gf.direction[i] == 0.0);
}

TEST_CASE("image_gradients: directions stay in [0, pi)") {
    const FeatureMap g = random_map<double>(5, 1, 1, 9, 9);
    const GradientField gf = image_gradients(g);
    for (double d : gf.direction) {
        CHECK(d >= 0.0);
        CHECK(d < 3.14159265358979323846);
    }
    CHECK_THROWS(image_gradients(FeatureMap(1, 2, 4, 4)));  // c != 1
    CHECK_THROWS(image_gradients(FeatureMap(2, 1, 4, 4)));  // b != 1
}

TEST_CASE("vertical edge: all histogram mass lands in bin 0") {
    const FeatureMap img = vertical_edge(8, 8);
    HogParams p;
    p.cell_size = 8;
    p.n_bins = 9;
    p.gamma = std::nullopt;  // step stays a step
    const HogDescriptor d = hog(img, p);
    CHECK(d.cells_y == 1);
    CHECK(d.cells_x == 1);
    // Only the two columns around the step have nonzero magnitude: 16 pixels
    // in count mode, all at direction 0 -> bin 0; standardized to 1.
    CHECK(d.cell(0, 0)[0] == doctest::Approx(1.0).epsilon(1e-9));
    for (i64 bi = 1; bi < 9; ++bi) CHECK(d.cell(0, 0)[bi] == 0.0);
}

TEST_CASE("horizontal edge: mass lands in the middle bin") {
    FeatureMap img(1, 1, 8, 8);
    for (i64 y = 0; y < 8; ++y)
        for (i64 x = 0; x < 8; ++x) img.at(0, 0, y, x) = y < 4 ? 0.0 : 1.0;
    HogParams p;
    p.gamma = std::nullopt;
    const HogDescriptor d = hog(img, p);
    // Vertical gradient: direction pi/2 -> bin floor((pi/2)/(pi/9)) = 4.
    CHECK(d.cell(0, 0)[4] == doctest::Approx(1.0).epsilon(1e-9));
    for (i64 bi = 0; bi < 9; ++bi)
        if (bi != 4) CHECK(d.cell(0, 0)[bi] == 0.0);
}

TEST_CASE("constant image: descriptor is exactly zero") {
    FeatureMap img(1, 1, 16, 16);
    for (auto& v : img.data) v = 0.75;
    const HogDescriptor d = hog(img);
    for (double v : d.values) CHECK(v == 0.0);
}

TEST_CASE("count-mode descriptor is bitwise scale invariant") {
    SeededRng seeds(9000);
    for (int rep = 0; rep < 5; ++rep) {
        FeatureMap img = random_map<double>(seeds.next_u64(), 1, 1, 16, 16);
        for (auto& v : img.data) v = std::abs(v);  // keep gamma active
        const HogDescriptor base = hog(img);
        for (double a : {0.5, 2.0, 10.0}) {
            const HogDescriptor s = hog(scaled(img, a));
            REQUIRE(s.values.size() == base.values.size());
            for (size_t i = 0; i < s.values.size(); ++i)
                CHECK(s.values[i] == base.values[i]);
        }
    }
}

TEST_CASE("magnitude mode is not scale invariant, count mode is") {
    FeatureMap img = random_map<double>(42, 1, 1, 16, 16);
    for (auto& v : img.data) v = std::abs(v);
    HogParams pm;
    pm.binning = HogBinning::Magnitude;
    const HogDescriptor m1 = hog(img, pm);
    const HogDescriptor m2 = hog(scaled(img, 4.0), pm);
    // Standardization removes a global factor; epsilon keeps a residual.
    bool any_diff = false;
    for (size_t i = 0; i < m1.values.size(); ++i)
        any_diff = any_diff || m1.values[i] != m2.values[i];
    CHECK(any_diff);
}

TEST_CASE("standardization: 3-4-5 cell at epsilon zero") {
    HogDescriptor d;
    d.cells_y = 1;
    d.cells_x = 1;
    d.n_bins = 4;
    d.values = {3.0, 4.0, 0.0, 0.0};
    normalize_descriptor(d, 0.0);
    CHECK(d.values[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(d.values[1] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(d.values[2] == 0.0);
    CHECK(d.values[3] == 0.0);

    HogDescriptor zero;
    zero.cells_y = 1;
    zero.cells_x = 1;
    zero.n_bins = 3;
    zero.values = {0.0, 0.0, 0.0};
    normalize_descriptor(zero, 0.0);  // must not divide by zero
    for (double v : zero.values) CHECK(v == 0.0);
}

TEST_CASE("partial border cells are dropped") {
    const FeatureMap img = random_map<double>(77, 1, 1, 19, 21);
    HogParams p;
    p.cell_size = 8;
    const HogDescriptor d = hog(img, p);
    CHECK(d.cells_y == 2);  // 19 / 8
    CHECK(d.cells_x == 2);  // 21 / 8
    CHECK(d.values.size() == 2u * 2u * 9u);
}

TEST_CASE("translation moves cell content with the image") {
    // Content confined to one cell; shifting by the cell size moves its
    // descriptor block wholesale.
    FeatureMap img(1, 1, 16, 16);
    for (i64 y = 0; y < 8; ++y)
        for (i64 x = 0; x < 8; ++x)
            img.at(0, 0, y, x) = ((x + y) % 3 == 0) ? 1.0 : 0.2;
    FeatureMap shifted(1, 1, 16, 16);
    for (i64 y = 0; y < 8; ++y)
        for (i64 x = 0; x < 8; ++x)
            shifted.at(0, 0, y + 8, x + 8) = img.at(0, 0, y, x);
    const HogDescriptor a = hog(img);
    const HogDescriptor b = hog(shifted);
    // Interior of the populated cell sees identical neighbourhoods except at
    // its boundary; compare the dominant bins loosely.
    double mass_a = 0.0, mass_b = 0.0;
    for (i64 bi = 0; bi < 9; ++bi) {
        mass_a += a.cell(0, 0)[bi] * a.cell(0, 0)[bi];
        mass_b += b.cell(1, 1)[bi] * b.cell(1, 1)[bi];
    }
    CHECK(mass_a == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(mass_b == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("gamma rejects non-positive values; clamp keeps pow defined") {
    HogParams p;
    p.gamma = -1.0;
    CHECK_THROWS(p.validate());
    // Negative inputs are clamped before the power, so no NaNs appear.
    FeatureMap img = random_map<double>(88, 1, 1, 16, 16);  // values in [-1, 1)
    const HogDescriptor d = hog(img);
    for (double v : d.values) CHECK(v == v);
}

TEST_CASE("descriptor text dump is stable") {
    HogDescriptor d;
    d.cells_y = 1;
    d.cells_x = 2;
    d.n_bins = 2;
    d.values = {0.5, 0.25, 1.0, 0.0};
    std::ostringstream os;
    dump_descriptor(d, os);
    CHECK(os.str() == "1 2 2\n0.5 0.25\n1 0\n");
}
