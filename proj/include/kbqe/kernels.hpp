#pragma once

// Dense arithmetic kernels used by the scoring loops.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (AArch64) variant. The variant is
// picked once at startup from the CPU features; setting KBQE_ISA=scalar in
// the environment forces the reference path.
//
// Element-wise kernels produce bit-identical results across variants.
// Reductions (dot, sum, em_step's return value) may differ in the last
// few ulps because lanes are summed in a different order.

#include <cstddef>
#include <span>
#include <string_view>

namespace kbqe::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
    Isa isa;
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
    // out[i] = counts[i] * z[i], z[i] = (1-l)*theta[i] / ((1-l)*theta[i] + l*background[i]).
    // Returns sum(out).
    double (*em_step)(const double* counts, const double* theta, const double* background,
                      double lambda, double* out, std::size_t n);
    // out[i] = (counts[i] + mu * coll_probs[i]) * inv_norm
    void (*dirichlet)(const double* counts, const double* coll_probs, double mu, double inv_norm,
                      double* out, std::size_t n);
    // a[i] *= factor
    void (*scale)(double* a, double factor, std::size_t n);
};

bool supported(Isa isa);

/// Kernel table for a specific instruction set. Throws std::invalid_argument
/// when the running CPU (or the build) lacks it.
const KernelTable& table(Isa isa);

/// Table chosen at startup.
const KernelTable& active();

/// Overrides the startup choice; used by tests and benchmarks.
void select(Isa isa);

// Convenience wrappers over the active table.

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline double sum(std::span<const double> a) { return active().sum(a.data(), a.size()); }

inline double em_step(std::span<const double> counts, std::span<const double> theta,
                      std::span<const double> background, double lambda, std::span<double> out) {
    return active().em_step(counts.data(), theta.data(), background.data(), lambda, out.data(),
                            out.size());
}

inline void dirichlet(std::span<const double> counts, std::span<const double> coll_probs,
                      double mu, double inv_norm, std::span<double> out) {
    active().dirichlet(counts.data(), coll_probs.data(), mu, inv_norm, out.data(), out.size());
}

inline void scale(std::span<double> a, double factor) {
    active().scale(a.data(), factor, a.size());
}

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
const KernelTable* neon_table();  // nullptr when not compiled in
}  // namespace detail

}  // namespace kbqe::kernels
