#include "theta/kernels.hpp"

#include <stdexcept>

namespace theta {

const RowKernel& naive_row_kernel();
const RowKernel& rotor_row_kernel();
#if defined(__x86_64__) || defined(_M_X64)
const RowKernel& avx2_row_kernel();
#endif
#if defined(__aarch64__)
const RowKernel& neon_row_kernel();
#endif

bool simd_available() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#elif defined(__aarch64__)
    return true;
#else
    return false;
#endif
}

const RowKernel& row_kernel(KernelKind kind) {
    switch (kind) {
    case KernelKind::naive:
        return naive_row_kernel();
    case KernelKind::rotor:
        return rotor_row_kernel();
    case KernelKind::simd:
    case KernelKind::parallel: // chunk-level threading sits above the row kernel
#if defined(__x86_64__) || defined(_M_X64)
        if (simd_available()) return avx2_row_kernel();
#elif defined(__aarch64__)
        return neon_row_kernel();
#endif
        return rotor_row_kernel();
    }
    return rotor_row_kernel();
}

KernelKind kernel_from_name(const std::string& name) {
    if (name == "naive") return KernelKind::naive;
    if (name == "rotor") return KernelKind::rotor;
    if (name == "simd") return KernelKind::simd;
    if (name == "parallel") return KernelKind::parallel;
    throw std::invalid_argument("unknown kernel: " + name);
}

std::string kernel_name(KernelKind k) {
    switch (k) {
    case KernelKind::naive:
        return "naive";
    case KernelKind::rotor:
        return "rotor";
    case KernelKind::simd:
        return "simd";
    case KernelKind::parallel:
        return "parallel";
    }
    return "rotor";
}

} // namespace theta
