#include "xlab/kernels.hpp"

#include <atomic>

namespace xlab::kernels {

namespace {

struct Table {
    double (*dot)(const double*, const double*, std::size_t) noexcept;
    double (*sum)(const double*, std::size_t) noexcept;
    void (*mul)(const double*, const double*, double*, std::size_t) noexcept;
    void (*axpy)(double, const double*, double*, std::size_t) noexcept;
    void (*rotate)(double*, double*, double, double, std::size_t) noexcept;
};

constexpr Table kScalar{scalar::dot, scalar::sum, scalar::mul, scalar::axpy, scalar::rotate};
#if defined(__x86_64__) || defined(_M_X64)
constexpr Table kAvx2{avx2::dot, avx2::sum, avx2::mul, avx2::axpy, avx2::rotate};
#endif
#if defined(__aarch64__)
constexpr Table kNeon{neon::dot, neon::sum, neon::mul, neon::axpy, neon::rotate};
#endif

const Table* table_for(Isa isa) noexcept {
    switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::Avx2:
        return &kAvx2;
#endif
#if defined(__aarch64__)
    case Isa::Neon:
        return &kNeon;
#endif
    default:
        return &kScalar;
    }
}

std::atomic<Isa>& current() noexcept {
    static std::atomic<Isa> isa{detected_isa()};
    return isa;
}

inline const Table& active() noexcept { return *table_for(current().load(std::memory_order_relaxed)); }

} // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
    case Isa::Avx2:
        return "avx2";
    case Isa::Neon:
        return "neon";
    default:
        return "scalar";
    }
}

Isa detected_isa() noexcept {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return Isa::Avx2;
    return Isa::Scalar;
#elif defined(__aarch64__)
    return Isa::Neon;
#else
    return Isa::Scalar;
#endif
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

Isa set_isa(Isa isa) noexcept {
    const Isa supported = detected_isa();
    const Isa chosen = (isa == Isa::Scalar || isa == supported) ? isa : Isa::Scalar;
    current().store(chosen, std::memory_order_relaxed);
    return chosen;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return active().dot(a.data(), b.data(), a.size());
}

double sum(std::span<const double> a) noexcept { return active().sum(a.data(), a.size()); }

void mul(std::span<const double> a, std::span<const double> b, std::span<double> out) noexcept {
    active().mul(a.data(), b.data(), out.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

void rotate(std::span<double> x, std::span<double> y, double c, double s) noexcept {
    active().rotate(x.data(), y.data(), c, s, x.size());
}

} // namespace xlab::kernels
