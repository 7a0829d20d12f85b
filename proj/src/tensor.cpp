#include "pixad/tensor.hpp"

#include <istream>
#include <ostream>

#include "pixad/detail/serial.hpp"

namespace pixad {

void dump(const FeatureMap& f, std::ostream& os) {
    detail::put_u64_le(os, static_cast<u64>(f.b));
    detail::put_u64_le(os, static_cast<u64>(f.c));
    detail::put_u64_le(os, static_cast<u64>(f.h));
    detail::put_u64_le(os, static_cast<u64>(f.w));
    for (double v : f.data) detail::put_f64_le(os, v);
}

FeatureMap load_feature_map(std::istream& is) {
    const i64 b = static_cast<i64>(detail::get_u64_le(is));
    const i64 c = static_cast<i64>(detail::get_u64_le(is));
    const i64 h = static_cast<i64>(detail::get_u64_le(is));
    const i64 w = static_cast<i64>(detail::get_u64_le(is));
    PIXAD_CHECK(b >= 1 && c >= 1 && h >= 1 && w >= 1 &&
                    b * c * h * w < (i64(1) << 40),
                "implausible feature map header");
    FeatureMap f(b, c, h, w);
    for (auto& v : f.data) v = detail::bits_double(detail::get_u64_le(is));
    return f;
}

}  // namespace pixad
