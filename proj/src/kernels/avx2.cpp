// Built with -mavx2 only (no -mfma) so element-wise results match the
// scalar kernels bit for bit.

#include <immintrin.h>

#include "kbqe/kernels.hpp"

namespace kbqe::kernels::detail {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    const __m128d swapped = _mm_unpackhi_pd(pair, pair);
    return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        acc1 = _mm256_add_pd(acc1,
                             _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

double sum_avx2(const double* a, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(a + i + 4));
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        acc += a[i];
    }
    return acc;
}

double em_step_avx2(const double* counts, const double* theta, const double* background,
                    double lambda, double* out, std::size_t n) {
    const double keep = 1.0 - lambda;
    const __m256d keep_v = _mm256_set1_pd(keep);
    const __m256d lambda_v = _mm256_set1_pd(lambda);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d topic = _mm256_mul_pd(keep_v, _mm256_loadu_pd(theta + i));
        const __m256d noise = _mm256_mul_pd(lambda_v, _mm256_loadu_pd(background + i));
        const __m256d z = _mm256_div_pd(topic, _mm256_add_pd(topic, noise));
        const __m256d r = _mm256_mul_pd(_mm256_loadu_pd(counts + i), z);
        _mm256_storeu_pd(out + i, r);
        acc = _mm256_add_pd(acc, r);
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double topic = keep * theta[i];
        const double noise = lambda * background[i];
        out[i] = counts[i] * (topic / (topic + noise));
        total += out[i];
    }
    return total;
}

void dirichlet_avx2(const double* counts, const double* coll_probs, double mu, double inv_norm,
                    double* out, std::size_t n) {
    const __m256d mu_v = _mm256_set1_pd(mu);
    const __m256d inv_v = _mm256_set1_pd(inv_norm);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d smoothed = _mm256_add_pd(_mm256_loadu_pd(counts + i),
                                               _mm256_mul_pd(mu_v, _mm256_loadu_pd(coll_probs + i)));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(smoothed, inv_v));
    }
    for (; i < n; ++i) {
        out[i] = (counts[i] + mu * coll_probs[i]) * inv_norm;
    }
}

void scale_avx2(double* a, double factor, std::size_t n) {
    const __m256d f = _mm256_set1_pd(factor);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(a + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), f));
    }
    for (; i < n; ++i) {
        a[i] *= factor;
    }
}

constexpr KernelTable kAvx2{Isa::avx2,   dot_avx2,       sum_avx2,
                            em_step_avx2, dirichlet_avx2, scale_avx2};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace kbqe::kernels::detail
