#include "pixad/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "pixad/hog.hpp"

namespace pixad {

namespace {

// Next whitespace-separated token, skipping '#' comments to end of line.
bool next_token(std::istream& is, std::string& tok) {
    tok.clear();
    int ch;
    while ((ch = is.get()) != EOF) {
        if (ch == '#') {
            while ((ch = is.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty()) return true;
            continue;
        }
        tok.push_back(static_cast<char>(ch));
    }
    return !tok.empty();
}

i64 next_int(std::istream& is, const char* what) {
    std::string tok;
    PIXAD_CHECK(next_token(is, tok), std::string("pgm: missing ") + what);
    try {
        size_t used = 0;
        const long long v = std::stoll(tok, &used);
        PIXAD_CHECK(used == tok.size(), std::string("pgm: malformed ") + what);
        return static_cast<i64>(v);
    } catch (const std::invalid_argument&) {
        fail(std::string("pgm: malformed ") + what);
    } catch (const std::out_of_range&) {
        fail(std::string("pgm: out-of-range ") + what);
    }
}

}  // namespace

PgmImage read_pgm(std::istream& is) {
    std::string magic;
    PIXAD_CHECK(next_token(is, magic), "pgm: empty stream");
    PIXAD_CHECK(magic == "P2", "pgm: plain P2 format required");
    const i64 w = next_int(is, "width");
    const i64 h = next_int(is, "height");
    PIXAD_CHECK(w >= 1 && h >= 1, "pgm: dims must be >= 1");
    const i64 maxval = next_int(is, "maxval");
    PIXAD_CHECK(maxval == 255, "pgm: maxval must be 255");
    PgmImage img;
    img.h = h;
    img.w = w;
    img.pixels.resize(static_cast<size_t>(h * w));
    for (auto& p : img.pixels) {
        const i64 v = next_int(is, "pixel");
        PIXAD_CHECK(v >= 0 && v <= 255, "pgm: pixel out of range");
        p = static_cast<int>(v);
    }
    return img;
}

PgmImage read_pgm_file(const std::string& path) {
    std::ifstream in(path);
    PIXAD_CHECK(in.good(), "pgm: cannot open " + path);
    return read_pgm(in);
}

void write_pgm(const PgmImage& img, std::ostream& os) {
    PIXAD_CHECK(img.h >= 1 && img.w >= 1 &&
                    img.pixels.size() == static_cast<size_t>(img.h * img.w),
                "pgm: inconsistent image");
    os << "P2\n" << img.w << " " << img.h << "\n255\n";
    for (i64 y = 0; y < img.h; ++y) {
        for (i64 x = 0; x < img.w; ++x) {
            const int v = img.pixels[static_cast<size_t>(y * img.w + x)];
            PIXAD_CHECK(v >= 0 && v <= 255, "pgm: pixel out of range");
            os << (x ? " " : "") << v;
        }
        os << "\n";
    }
}

void write_pgm_file(const PgmImage& img, const std::string& path) {
    std::ofstream out(path);
    PIXAD_CHECK(out.good(), "pgm: cannot open " + path);
    write_pgm(img, out);
}

FeatureMap pgm_to_map(const PgmImage& img) {
    FeatureMap f(1, 1, img.h, img.w);
    for (size_t i = 0; i < img.pixels.size(); ++i)
        f.data[i] = static_cast<double>(img.pixels[i]) / 255.0;
    return f;
}

PgmImage map_to_pgm(const FeatureMap& f) {
    PIXAD_CHECK(f.b == 1, "map_to_pgm expects a single image");
    FeatureMap gray = to_grayscale(f);
    double lo = gray.data[0], hi = gray.data[0];
    for (double v : gray.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    PgmImage img;
    img.h = f.h;
    img.w = f.w;
    img.pixels.resize(gray.data.size());
    if (hi == lo) {
        std::fill(img.pixels.begin(), img.pixels.end(), 0);
        return img;
    }
    const double scale = 255.0 / (hi - lo);
    for (size_t i = 0; i < gray.data.size(); ++i)
        img.pixels[i] = static_cast<int>(std::llround((gray.data[i] - lo) * scale));
    return img;
}

}  // namespace pixad
