#pragma once

#include <array>
#include <cstring>
#include <istream>
#include <ostream>

#include "pixad/common.hpp"

namespace pixad::detail {

inline void put_u64_le(std::ostream& os, u64 v) {
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i)
        b[static_cast<size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b.data(), 8);
}

inline u64 get_u64_le(std::istream& is) {
    std::array<char, 8> b;
    is.read(b.data(), 8);
    PIXAD_CHECK(is.gcount() == 8, "truncated stream");
    u64 v = 0;
    for (int i = 7; i >= 0; --i)
        v = (v << 8) | static_cast<unsigned char>(b[static_cast<size_t>(i)]);
    return v;
}

inline u64 double_bits(double d) {
    u64 v;
    static_assert(sizeof(v) == sizeof(d));
    std::memcpy(&v, &d, 8);
    return v;
}

inline double bits_double(u64 v) {
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}

inline void put_f64_le(std::ostream& os, double d) { put_u64_le(os, double_bits(d)); }
inline double get_f64_le(std::istream& is) { return bits_double(get_u64_le(is)); }

}  // namespace pixad::detail
