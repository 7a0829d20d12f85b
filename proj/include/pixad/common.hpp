#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pixad {

using i64 = std::int64_t;
using u64 = std::uint64_t;

// All contract violations throw std::invalid_argument with a readable message.
[[noreturn]] inline void fail(const std::string& msg) {
    throw std::invalid_argument(msg);
}

#define PIXAD_CHECK(cond, msg)                                                 \
    do {                                                                       \
        if (!(cond)) ::pixad::fail(std::string(msg));                          \
    } while (0)

}  // namespace pixad
