#pragma once

// Data-parallel inner loops shared by the contraction engine, the stepping
// operator and the Jacobi eigensolver.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2+FMA (x86-64) or NEON (aarch64) variant. The variant is
// chosen once at startup from the CPU features; set_isa() overrides it, which
// the equivalence tests use to compare variants on identical inputs.
//
// SIMD reductions reassociate sums, so results differ from the scalar
// reference by rounding only. For a fixed ISA every kernel is deterministic.

#include <cstddef>
#include <span>
#include <string_view>

namespace xlab::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

/// Best ISA supported by the running CPU.
Isa detected_isa() noexcept;

/// ISA currently used by the dispatching entry points.
Isa active_isa() noexcept;

/// Selects a variant. Requests the CPU cannot run fall back to Scalar.
/// Returns the ISA actually selected.
Isa set_isa(Isa isa) noexcept;

/// Sum of a[i] * b[i].
double dot(std::span<const double> a, std::span<const double> b) noexcept;

/// Sum of a[i].
double sum(std::span<const double> a) noexcept;

/// out[i] = a[i] * b[i]. `out` may alias `a` or `b`.
void mul(std::span<const double> a, std::span<const double> b, std::span<double> out) noexcept;

/// y[i] += alpha * x[i].
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;

/// Plane rotation: (x, y) <- (c*x - s*y, s*x + c*y) elementwise.
void rotate(std::span<double> x, std::span<double> y, double c, double s) noexcept;

/// Per-ISA entry points, bypassing dispatch. Used by the equivalence tests.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double sum(const double* a, std::size_t n) noexcept;
void mul(const double* a, const double* b, double* out, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
void rotate(double* x, double* y, double c, double s, std::size_t n) noexcept;
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double sum(const double* a, std::size_t n) noexcept;
void mul(const double* a, const double* b, double* out, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
void rotate(double* x, double* y, double c, double s, std::size_t n) noexcept;
} // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double sum(const double* a, std::size_t n) noexcept;
void mul(const double* a, const double* b, double* out, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
void rotate(double* x, double* y, double c, double s, std::size_t n) noexcept;
} // namespace neon
#endif

// Generic fallbacks so templated numeric code can call the same names for
// exact arithmetic types.
template <class T>
T dot(std::span<const T> a, std::span<const T> b) {
    T acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += a[i] * b[i];
    return acc;
}

template <class T>
T sum(std::span<const T> a) {
    T acc = 0;
    for (const auto& v : a)
        acc += v;
    return acc;
}

template <class T>
void mul(std::span<const T> a, std::span<const T> b, std::span<T> out) {
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] * b[i];
}

template <class T>
void axpy(const T& alpha, std::span<const T> x, std::span<T> y) {
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] += alpha * x[i];
}

} // namespace xlab::kernels
