#include <immintrin.h>

#include <cmath>

#include "pixad/kernels.hpp"

namespace pixad::kern::detail {

// =====
// AVX2 kernels
// =====
//
// Bit-compatibility rules: no FMA (separate mul + add, exactly like the scalar
// path under -ffp-contract=off), no cross-lane reductions, std::exp stays
// scalar. Every lane is an independent output element.

namespace {

// ---- float, 8 lanes ----

void acc_mul_avx2_f32(float* dst, const float* a, const float* b, i64 len) {
    i64 i = 0;
    for (; i + 8 <= len; i += 8) {
        __m256 va = _mm256_loadu_ps(a + i);
        __m256 vb = _mm256_loadu_ps(b + i);
        __m256 vd = _mm256_loadu_ps(dst + i);
        _mm256_storeu_ps(dst + i, _mm256_add_ps(vd, _mm256_mul_ps(va, vb)));
    }
    for (; i < len; ++i) dst[i] += a[i] * b[i];
}

void acc_scal_avx2_f32(float* dst, float s, const float* a, i64 len) {
    const __m256 vs = _mm256_set1_ps(s);
    i64 i = 0;
    for (; i + 8 <= len; i += 8) {
        __m256 va = _mm256_loadu_ps(a + i);
        __m256 vd = _mm256_loadu_ps(dst + i);
        _mm256_storeu_ps(dst + i, _mm256_add_ps(vd, _mm256_mul_ps(vs, va)));
    }
    for (; i < len; ++i) dst[i] += s * a[i];
}

void row_max_avx2_f32(float* m, const float* a, i64 len) {
    i64 i = 0;
    for (; i + 8 <= len; i += 8) {
        __m256 vm = _mm256_loadu_ps(m + i);
        __m256 va = _mm256_loadu_ps(a + i);
        _mm256_storeu_ps(m + i, _mm256_max_ps(vm, va));
    }
    for (; i < len; ++i) m[i] = m[i] < a[i] ? a[i] : m[i];
}

void sub_exp_avx2_f32(float* dst, const float* a, const float* m, i64 len) {
    // exp must match the scalar kernel bit-for-bit, so it stays libm.
    for (i64 i = 0; i < len; ++i) dst[i] = std::exp(a[i] - m[i]);
}

void row_div_avx2_f32(float* dst, const float* d, i64 len) {
    i64 i = 0;
    for (; i + 8 <= len; i += 8) {
        __m256 vd = _mm256_loadu_ps(dst + i);
        __m256 vq = _mm256_loadu_ps(d + i);
        _mm256_storeu_ps(dst + i, _mm256_div_ps(vd, vq));
    }
    for (; i < len; ++i) dst[i] /= d[i];
}

void scale_avx2_f32(float* dst, float s, i64 len) {
    const __m256 vs = _mm256_set1_ps(s);
    i64 i = 0;
    for (; i + 8 <= len; i += 8) {
        __m256 vd = _mm256_loadu_ps(dst + i);
        _mm256_storeu_ps(dst + i, _mm256_mul_ps(vd, vs));
    }
    for (; i < len; ++i) dst[i] *= s;
}

// ---- double, 4 lanes ----

void acc_mul_avx2_f64(double* dst, const double* a, const double* b, i64 len) {
    i64 i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        __m256d vd = _mm256_loadu_pd(dst + i);
        _mm256_storeu_pd(dst + i, _mm256_add_pd(vd, _mm256_mul_pd(va, vb)));
    }
    for (; i < len; ++i) dst[i] += a[i] * b[i];
}

void acc_scal_avx2_f64(double* dst, double s, const double* a, i64 len) {
    const __m256d vs = _mm256_set1_pd(s);
    i64 i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vd = _mm256_loadu_pd(dst + i);
        _mm256_storeu_pd(dst + i, _mm256_add_pd(vd, _mm256_mul_pd(vs, va)));
    }
    for (; i < len; ++i) dst[i] += s * a[i];
}

void row_max_avx2_f64(double* m, const double* a, i64 len) {
    i64 i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d vm = _mm256_loadu_pd(m + i);
        __m256d va = _mm256_loadu_pd(a + i);
        _mm256_storeu_pd(m + i, _mm256_max_pd(vm, va));
    }
    for (; i < len; ++i) m[i] = m[i] < a[i] ? a[i] : m[i];
}

void sub_exp_avx2_f64(double* dst, const double* a, const double* m, i64 len) {
    for (i64 i = 0; i < len; ++i) dst[i] = std::exp(a[i] - m[i]);
}

void row_div_avx2_f64(double* dst, const double* d, i64 len) {
    i64 i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d vd = _mm256_loadu_pd(dst + i);
        __m256d vq = _mm256_loadu_pd(d + i);
        _mm256_storeu_pd(dst + i, _mm256_div_pd(vd, vq));
    }
    for (; i < len; ++i) dst[i] /= d[i];
}

void scale_avx2_f64(double* dst, double s, i64 len) {
    const __m256d vs = _mm256_set1_pd(s);
    i64 i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d vd = _mm256_loadu_pd(dst + i);
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(vd, vs));
    }
    for (; i < len; ++i) dst[i] *= s;
}

const RowKernels<float> kAvx2F32 = {acc_mul_avx2_f32, acc_scal_avx2_f32,
                                    row_max_avx2_f32, sub_exp_avx2_f32,
                                    row_div_avx2_f32, scale_avx2_f32};
const RowKernels<double> kAvx2F64 = {acc_mul_avx2_f64, acc_scal_avx2_f64,
                                     row_max_avx2_f64, sub_exp_avx2_f64,
                                     row_div_avx2_f64, scale_avx2_f64};

}  // namespace

const RowKernels<float>& avx2_table_f32() { return kAvx2F32; }
const RowKernels<double>& avx2_table_f64() { return kAvx2F64; }

}  // namespace pixad::kern::detail
