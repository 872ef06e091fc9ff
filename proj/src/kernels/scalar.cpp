#include "kbqe/kernels.hpp"

namespace kbqe::kernels::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

double sum_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i];
    }
    return acc;
}

double em_step_scalar(const double* counts, const double* theta, const double* background,
                      double lambda, double* out, std::size_t n) {
    const double keep = 1.0 - lambda;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double topic = keep * theta[i];
        const double noise = lambda * background[i];
        out[i] = counts[i] * (topic / (topic + noise));
        total += out[i];
    }
    return total;
}

void dirichlet_scalar(const double* counts, const double* coll_probs, double mu, double inv_norm,
                      double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (counts[i] + mu * coll_probs[i]) * inv_norm;
    }
}

void scale_scalar(double* a, double factor, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        a[i] *= factor;
    }
}

constexpr KernelTable kScalar{Isa::scalar,     dot_scalar,       sum_scalar,
                              em_step_scalar,  dirichlet_scalar, scale_scalar};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace kbqe::kernels::detail
