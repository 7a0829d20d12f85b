#include <cmath>

#include "pixad/kernels.hpp"

namespace pixad::kern {

// =====
// Scalar reference kernels
// =====
//
// These define the semantics. Vector variants may only reorganize independent
// lanes, never a reduction, so they reproduce these results bit-for-bit.

namespace {

template <typename T>
void acc_mul_scalar(T* dst, const T* a, const T* b, i64 len) {
    for (i64 i = 0; i < len; ++i) dst[i] += a[i] * b[i];
}

template <typename T>
void acc_scal_scalar(T* dst, T s, const T* a, i64 len) {
    for (i64 i = 0; i < len; ++i) dst[i] += s * a[i];
}

template <typename T>
void row_max_scalar(T* m, const T* a, i64 len) {
    for (i64 i = 0; i < len; ++i) m[i] = m[i] < a[i] ? a[i] : m[i];
}

template <typename T>
void sub_exp_scalar(T* dst, const T* a, const T* m, i64 len) {
    for (i64 i = 0; i < len; ++i) dst[i] = std::exp(a[i] - m[i]);
}

template <typename T>
void row_div_scalar(T* dst, const T* d, i64 len) {
    for (i64 i = 0; i < len; ++i) dst[i] /= d[i];
}

template <typename T>
void scale_scalar(T* dst, T s, i64 len) {
    for (i64 i = 0; i < len; ++i) dst[i] *= s;
}

template <typename T>
constexpr RowKernels<T> make_scalar_table() {
    return RowKernels<T>{acc_mul_scalar<T>, acc_scal_scalar<T>, row_max_scalar<T>,
                         sub_exp_scalar<T>, row_div_scalar<T>, scale_scalar<T>};
}

constexpr RowKernels<float> kScalarF32 = make_scalar_table<float>();
constexpr RowKernels<double> kScalarF64 = make_scalar_table<double>();

}  // namespace

#if defined(PIXAD_HAVE_AVX2)
namespace detail {
const RowKernels<float>& avx2_table_f32();
const RowKernels<double>& avx2_table_f64();
}  // namespace detail
#endif

template <>
const RowKernels<float>& kernels<float>(Isa isa) {
#if defined(PIXAD_HAVE_AVX2)
    if (isa == Isa::Avx2) return detail::avx2_table_f32();
#endif
    PIXAD_CHECK(isa == Isa::Scalar, "unresolved or unavailable ISA");
    return kScalarF32;
}

template <>
const RowKernels<double>& kernels<double>(Isa isa) {
#if defined(PIXAD_HAVE_AVX2)
    if (isa == Isa::Avx2) return detail::avx2_table_f64();
#endif
    PIXAD_CHECK(isa == Isa::Scalar, "unresolved or unavailable ISA");
    return kScalarF64;
}

}  // namespace pixad::kern
