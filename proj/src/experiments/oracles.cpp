#include "xlab/oracles.hpp"

#include "xlab/errors.hpp"
#include "xlab/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace xlab::oracle {

double convolution_eigenvalue(int k) {
    const auto g = [k](double u) { return std::cos(k * std::numbers::pi * std::exp(2.0 - u)) / (u * u); };
    // Zeros of the cosine: k pi e^(2-u) = (m + 1/2) pi.
    double acc = 0.0;
    double lo = 2.0;
    if (k > 0) {
        for (int m = k - 1; m >= 0; --m) {
            const double hi = 2.0 - std::log((m + 0.5) / k);
            if (hi > lo) {
                acc += quad::gauss_legendre(g, lo, hi, 24);
                lo = hi;
            }
        }
    }
    // Past the last zero the phase is below pi/2; march in unit panels until
    // the cosine is 1 to rounding, then add the 1/u tail.
    for (;;) {
        const double phase = k * std::numbers::pi * std::exp(2.0 - lo);
        if (phase < 1e-8)
            break;
        const double hi = lo + 1.0;
        acc += quad::gauss_legendre(g, lo, hi, 24);
        lo = hi;
    }
    return acc + 1.0 / lo;
}

double bilinear_c4_limit() {
    const double mu = quad::gauss_legendre([](double x) { return (2 * x - 1) * (2 * x - 1); }, 0.0, 1.0, 8);
    return 1.0 + std::pow(mu, 4);
}

Rational noncompact_block_sum(int K, int a, int b) {
    Rational total = 0;
    Rational term = 1;
    Rational base = 1;
    const int e = b - a;
    for (int i = 0; i < std::abs(e); ++i)
        base *= 2;
    if (e < 0)
        base = 1 / base;
    for (int k = 1; k <= K; ++k) {
        term *= base;
        total += term;
    }
    total += term;
    total.canonicalize();
    return total;
}

Rational complete_product_edge_density(int i) {
    Rational r = 1;
    for (int j = 2; j <= i; ++j)
        r *= Rational(j * (j - 1), j * j);
    r.canonicalize();
    return r;
}

Rational cycle_complete_normalized(int k, int n) {
    if (n < 2 || k < 3)
        throw ValidationError("cycle/complete oracle needs k >= 3 and n >= 2");
    BigInt q1 = n - 1;
    BigInt chi;
    mpz_pow_ui(chi.get_mpz_t(), q1.get_mpz_t(), static_cast<unsigned long>(k));
    chi += (k % 2 == 0) ? q1 : BigInt(-q1);
    // t* = hom p^(2b-a) / (2q)^b with a = b = k, p = n, 2q = n(n-1).
    BigInt pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(n * (n - 1)), static_cast<unsigned long>(k));
    Rational r(chi * pk, den);
    r.canonicalize();
    return r;
}

} // namespace xlab::oracle
