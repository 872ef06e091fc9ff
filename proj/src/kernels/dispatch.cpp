#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kbqe/kernels.hpp"

namespace kbqe::kernels {

namespace detail {
#if !KBQE_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif
#if !KBQE_HAVE_NEON
const KernelTable* neon_table() { return nullptr; }
#endif
}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if KBQE_HAVE_AVX2 && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable* startup_choice() {
    if (const char* forced = std::getenv("KBQE_ISA")) {
        const std::string name{forced};
        if (name == "scalar") {
            return &detail::scalar_table();
        }
        if (name == "avx2" && supported(Isa::avx2)) {
            return detail::avx2_table();
        }
        if (name == "neon" && supported(Isa::neon)) {
            return detail::neon_table();
        }
    }
    if (supported(Isa::avx2)) {
        return detail::avx2_table();
    }
    if (supported(Isa::neon)) {
        return detail::neon_table();
    }
    return &detail::scalar_table();
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{startup_choice()};
    return table;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

bool supported(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2: return detail::avx2_table() != nullptr && cpu_has_avx2();
        // NEON is part of the AArch64 baseline.
        case Isa::neon: return detail::neon_table() != nullptr;
    }
    return false;
}

const KernelTable& table(Isa isa) {
    if (!supported(isa)) {
        throw std::invalid_argument("kernel set not available: " + std::string{isa_name(isa)});
    }
    switch (isa) {
        case Isa::avx2: return *detail::avx2_table();
        case Isa::neon: return *detail::neon_table();
        case Isa::scalar: break;
    }
    return detail::scalar_table();
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) { current().store(&table(isa), std::memory_order_release); }

}  // namespace kbqe::kernels
