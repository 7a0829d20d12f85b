#include "pixad/simd.hpp"

#include "pixad/common.hpp"

namespace pixad {

bool cpu_has_avx2() {
#if defined(PIXAD_HAVE_AVX2) && (defined(__x86_64__) || defined(_M_X64))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa resolve_isa(Isa requested) {
    switch (requested) {
        case Isa::Auto:
            return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
        case Isa::Scalar:
            return Isa::Scalar;
        case Isa::Avx2:
            PIXAD_CHECK(cpu_has_avx2(), "AVX2 requested but not available");
            return Isa::Avx2;
    }
    return Isa::Scalar;
}

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::Auto: return "auto";
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "?";
}

}  // namespace pixad
