#pragma once

#include "pixad/common.hpp"
#include "pixad/simd.hpp"

namespace pixad::kern {

// Row primitives behind the runtime ISA dispatch. All of them are elementwise
// across independent lanes; reductions live in the callers' loop nests, so the
// scalar and AVX2 variants return identical bits for identical inputs.
//
//   acc_mul   dst[i] += a[i] * b[i]
//   acc_scal  dst[i] += s * a[i]
//   row_max   m[i]    = max(m[i], a[i])
//   sub_exp   dst[i]  = exp(a[i] - m[i])   (std::exp in every variant)
//   row_div   dst[i] /= d[i]
//   scale     dst[i] *= s

template <typename T>
struct RowKernels {
    void (*acc_mul)(T* dst, const T* a, const T* b, i64 len);
    void (*acc_scal)(T* dst, T s, const T* a, i64 len);
    void (*row_max)(T* m, const T* a, i64 len);
    void (*sub_exp)(T* dst, const T* a, const T* m, i64 len);
    void (*row_div)(T* dst, const T* d, i64 len);
    void (*scale)(T* dst, T s, i64 len);
};

template <typename T>
const RowKernels<T>& kernels(Isa isa);  // isa must be resolved (not Auto)

template <>
const RowKernels<float>& kernels<float>(Isa isa);
template <>
const RowKernels<double>& kernels<double>(Isa isa);

}  // namespace pixad::kern
