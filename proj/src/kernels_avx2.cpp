// Compiled with -mavx2 -mfma. Only reached through the dispatch table after
// a runtime CPU check, so nothing here may run on a CPU without AVX2.

#include <grasp/kernels.hpp>

#include <immintrin.h>

namespace grasp::kernels {
namespace {

inline double horizontal_sum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    const __m128d swapped = _mm_unpackhi_pd(pair, pair);
    return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

double dot_avx2(const double* x, const double* y, std::size_t n)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    if (i + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        i += 4;
    }
    double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        s += x[i] * y[i];
    }
    return s;
}

double sum_squares_avx2(const double* x, std::size_t n)
{
    return dot_avx2(x, x, n);
}

double weighted_sum_squares_avx2(const double* x, const double* w, std::size_t n)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d x0 = _mm256_loadu_pd(x + i);
        const __m256d x1 = _mm256_loadu_pd(x + i + 4);
        acc0 = _mm256_fmadd_pd(_mm256_mul_pd(x0, x0), _mm256_loadu_pd(w + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_mul_pd(x1, x1), _mm256_loadu_pd(w + i + 4), acc1);
    }
    if (i + 4 <= n) {
        const __m256d x0 = _mm256_loadu_pd(x + i);
        acc0 = _mm256_fmadd_pd(_mm256_mul_pd(x0, x0), _mm256_loadu_pd(w + i), acc0);
        i += 4;
    }
    double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        s += x[i] * x[i] * w[i];
    }
    return s;
}

double squared_distance_avx2(const double* x, const double* y, std::size_t n)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    if (i + 4 <= n) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        i += 4;
    }
    double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n)
{
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

constexpr KernelTable table{
    "avx2",
    dot_avx2,
    sum_squares_avx2,
    weighted_sum_squares_avx2,
    squared_distance_avx2,
    axpy_avx2,
};

} // namespace

namespace detail {
const KernelTable* avx2_table_unchecked() noexcept
{
    return &table;
}
} // namespace detail

} // namespace grasp::kernels
