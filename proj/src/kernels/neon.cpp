#include <arm_neon.h>

#include "kbqe/kernels.hpp"

namespace kbqe::kernels::detail {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

double sum_neon(const double* a, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vaddq_f64(acc0, vld1q_f64(a + i));
        acc1 = vaddq_f64(acc1, vld1q_f64(a + i + 2));
    }
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) {
        acc += a[i];
    }
    return acc;
}

double em_step_neon(const double* counts, const double* theta, const double* background,
                    double lambda, double* out, std::size_t n) {
    const double keep = 1.0 - lambda;
    const float64x2_t keep_v = vdupq_n_f64(keep);
    const float64x2_t lambda_v = vdupq_n_f64(lambda);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t topic = vmulq_f64(keep_v, vld1q_f64(theta + i));
        const float64x2_t noise = vmulq_f64(lambda_v, vld1q_f64(background + i));
        const float64x2_t z = vdivq_f64(topic, vaddq_f64(topic, noise));
        const float64x2_t r = vmulq_f64(vld1q_f64(counts + i), z);
        vst1q_f64(out + i, r);
        acc = vaddq_f64(acc, r);
    }
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double topic = keep * theta[i];
        const double noise = lambda * background[i];
        out[i] = counts[i] * (topic / (topic + noise));
        total += out[i];
    }
    return total;
}

void dirichlet_neon(const double* counts, const double* coll_probs, double mu, double inv_norm,
                    double* out, std::size_t n) {
    const float64x2_t mu_v = vdupq_n_f64(mu);
    const float64x2_t inv_v = vdupq_n_f64(inv_norm);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t smoothed =
            vaddq_f64(vld1q_f64(counts + i), vmulq_f64(mu_v, vld1q_f64(coll_probs + i)));
        vst1q_f64(out + i, vmulq_f64(smoothed, inv_v));
    }
    for (; i < n; ++i) {
        out[i] = (counts[i] + mu * coll_probs[i]) * inv_norm;
    }
}

void scale_neon(double* a, double factor, std::size_t n) {
    const float64x2_t f = vdupq_n_f64(factor);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(a + i, vmulq_f64(vld1q_f64(a + i), f));
    }
    for (; i < n; ++i) {
        a[i] *= factor;
    }
}

constexpr KernelTable kNeon{Isa::neon,   dot_neon,       sum_neon,
                            em_step_neon, dirichlet_neon, scale_neon};

}  // namespace

const KernelTable* neon_table() { return &kNeon; }

}  // namespace kbqe::kernels::detail
