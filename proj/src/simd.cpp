#include "hdanova/simd.hpp"

#include <cstddef>

#if defined(__x86_64__) || defined(_M_X64)
#define HDANOVA_X86 1
#include <immintrin.h>
#else
#define HDANOVA_X86 0
#endif

namespace hdanova::simd {

namespace {

// ---------------------------------------------------------------------------
// Scalar reference kernels
// ---------------------------------------------------------------------------

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s0 = 0.0, s1 = 0.0;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
    }
    if (i < n) s0 += a[i] * b[i];
    return s0 + s1;
}

void add_scalar(double* acc, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

void sub_scalar(double* acc, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] -= x[i];
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void kahan_add_scalar(double* acc, double* comp, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = x[i] - comp[i];
        double t = acc[i] + v;
        comp[i] = (t - acc[i]) - v;
        acc[i] = t;
    }
}

// ---------------------------------------------------------------------------
// AVX2 + FMA kernels. Compiled with target attributes so the translation
// unit itself builds without -mavx2; only executed after the cpuid check.
// ---------------------------------------------------------------------------

#if HDANOVA_X86

__attribute__((target("avx2,fma"))) double dot_avx2(const double* a, const double* b,
                                                    std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    acc0 = _mm256_add_pd(acc0, acc1);
    __m128d lo = _mm256_castpd256_pd128(acc0);
    __m128d hi = _mm256_extractf128_pd(acc0, 1);
    lo = _mm_add_pd(lo, hi);
    double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

__attribute__((target("avx2"))) void add_avx2(double* acc, const double* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(acc + i,
                         _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) acc[i] += x[i];
}

__attribute__((target("avx2"))) void sub_avx2(double* acc, const double* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(acc + i,
                         _mm256_sub_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) acc[i] -= x[i];
}

__attribute__((target("avx2,fma"))) void axpy_avx2(double alpha, const double* x, double* y,
                                                   std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i,
                         _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

__attribute__((target("avx2"))) void kahan_add_avx2(double* acc, double* comp, const double* x,
                                                    std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(acc + i);
        __m256d vc = _mm256_loadu_pd(comp + i);
        __m256d v = _mm256_sub_pd(_mm256_loadu_pd(x + i), vc);
        __m256d t = _mm256_add_pd(va, v);
        _mm256_storeu_pd(comp + i, _mm256_sub_pd(_mm256_sub_pd(t, va), v));
        _mm256_storeu_pd(acc + i, t);
    }
    kahan_add_scalar(acc + i, comp + i, x + i, n - i);
}

#endif  // HDANOVA_X86

// ---------------------------------------------------------------------------
// Dispatch table
// ---------------------------------------------------------------------------

struct Kernels {
    double (*dot)(const double*, const double*, std::size_t);
    void (*add)(double*, const double*, std::size_t);
    void (*sub)(double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*kahan_add)(double*, double*, const double*, std::size_t);
};

constexpr Kernels kScalar{dot_scalar, add_scalar, sub_scalar, axpy_scalar, kahan_add_scalar};

#if HDANOVA_X86
constexpr Kernels kAvx2{dot_avx2, add_avx2, sub_avx2, axpy_avx2, kahan_add_avx2};
#endif

IsaLevel detect() {
#if HDANOVA_X86
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return IsaLevel::Avx2;
    }
#endif
    return IsaLevel::Scalar;
}

IsaLevel g_active = detect();

const Kernels& table(IsaLevel level) {
#if HDANOVA_X86
    if (level == IsaLevel::Avx2) return kAvx2;
#endif
    (void)level;
    return kScalar;
}

}  // namespace

IsaLevel active_isa() { return g_active; }

IsaLevel detected_isa() { return detect(); }

IsaLevel force_isa(IsaLevel level) {
    IsaLevel prev = g_active;
    if (level == IsaLevel::Avx2 && detect() != IsaLevel::Avx2) level = IsaLevel::Scalar;
    g_active = level;
    return prev;
}

const char* isa_name(IsaLevel level) {
    switch (level) {
        case IsaLevel::Avx2: return "avx2";
        case IsaLevel::Scalar: return "scalar";
    }
    return "unknown";
}

double dot(std::span<const double> a, std::span<const double> b) {
    return table(g_active).dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

void add(std::span<double> acc, std::span<const double> x) {
    table(g_active).add(acc.data(), x.data(), acc.size());
}

void sub(std::span<double> acc, std::span<const double> x) {
    table(g_active).sub(acc.data(), x.data(), acc.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    table(g_active).axpy(alpha, x.data(), y.data(), y.size());
}

void kahan_add(std::span<double> acc, std::span<double> comp, std::span<const double> x) {
    table(g_active).kahan_add(acc.data(), comp.data(), x.data(), acc.size());
}

}  // namespace hdanova::simd
