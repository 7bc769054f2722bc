#include "xlab/spectral.hpp"

#include "xlab/errors.hpp"
#include "xlab/kernels.hpp"
#include "xlab/parallel.hpp"
#include "xlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace xlab {

namespace {

double off_diagonal_norm(const SquareMatrix<double>& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if (i != j)
                acc += a(i, j) * a(i, j);
    return std::sqrt(acc);
}

} // namespace

JacobiResult jacobi_eigen(SquareMatrix<double> a, double tol, int max_sweeps) {
    const std::size_t n = a.size();
    JacobiResult out;
    out.vectors = SquareMatrix<double>(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        out.vectors(i, i) = 1.0;

    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        out.off_norm = off_diagonal_norm(a);
        if (out.off_norm <= tol)
            break;
        out.sweeps = sweep;
        int rotations = 0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0)
                    continue;
                const double g = 100.0 * std::abs(apq);
                // Entries below the rounding floor of both diagonals are dropped.
                if (sweep > 4 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
                    std::abs(a(q, q)) + g == std::abs(a(q, q))) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0)
                    t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double app = a(p, p);
                const double aqq = a(q, q);

                kernels::rotate(a.row(p), a.row(q), c, s);
                for (std::size_t k = 0; k < n; ++k) {
                    a(k, p) = a(p, k);
                    a(k, q) = a(q, k);
                }
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                kernels::rotate(out.vectors.row(p), out.vectors.row(q), c, s);
                ++rotations;
            }
        }
        if (rotations == 0) {
            out.off_norm = off_diagonal_norm(a);
            break;
        }
        out.off_norm = off_diagonal_norm(a);
    }
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.values[i] = a(i, i);
    return out;
}

SquareMatrix<double> symmetrized_kernel(const FloatSpace& s) {
    const std::size_t n = s.size();
    std::vector<double> root(n);
    for (std::size_t i = 0; i < n; ++i)
        root[i] = std::sqrt(s.pi()[i]);
    SquareMatrix<double> m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = s.eta()(i, j) / (root[i] * root[j]);
    return m;
}

template <class T>
Spectrum spectrum(const MarkovSpace<T>& s) {
    if (s.size() > kMaxSpectrumAtoms)
        throw BudgetError("spectrum supports at most 4096 atoms");
    auto jr = jacobi_eigen(symmetrized_kernel(to_float(s)));
    std::sort(jr.values.begin(), jr.values.end(), std::greater<>());
    return {std::move(jr.values), jr.off_norm};
}

double power_sum(const std::vector<double>& eigenvalues, int k) {
    double acc = 0.0;
    for (double l : eigenvalues)
        acc += std::pow(l, k);
    return acc;
}

double schatten_norm(const std::vector<double>& eigenvalues, double p) {
    if (!(p >= 1.0))
        throw ValidationError("Schatten exponent must be at least 1");
    double acc = 0.0;
    for (double l : eigenvalues)
        acc += std::pow(std::abs(l), p);
    return std::pow(acc, 1.0 / p);
}

template <class T>
double cycle_density_spectral(const MarkovSpace<T>& s, int k) {
    if (k < 3)
        throw ValidationError("cycle length must be at least 3");
    return power_sum(spectrum(s).values, k);
}

template <class T>
double schatten_norm(const MarkovSpace<T>& s, double p) {
    return schatten_norm(spectrum(s).values, p);
}

double signed_eigenvalue(const std::vector<double>& descending, int k, int sign) {
    const auto idx = static_cast<std::size_t>(k - 1);
    if (sign > 0) {
        if (idx < descending.size() && descending[idx] > 0.0)
            return descending[idx];
        return 0.0;
    }
    if (idx < descending.size() && descending[descending.size() - 1 - idx] < 0.0)
        return descending[descending.size() - 1 - idx];
    return 0.0;
}

template <class T>
ProjectionReport projected_spectrum_check(const MarkovSpace<T>& s, const Partition& p) {
    ProjectionReport r;
    r.full = spectrum(s);
    r.projected = spectrum(project(s, p));
    r.max_violation = -std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(s.size());
    for (int k = 1; k <= n; ++k) {
        const double up = signed_eigenvalue(r.projected.values, k, 1) - signed_eigenvalue(r.full.values, k, 1);
        const double down = signed_eigenvalue(r.full.values, k, -1) - signed_eigenvalue(r.projected.values, k, -1);
        r.max_violation = std::max({r.max_violation, up, down});
        if (up > kSpectralTolerance || down > kSpectralTolerance)
            r.interlacing_ok = false;
    }
    for (double q : {2.0, 3.0, 4.0, 6.0}) {
        const double gap = schatten_norm(r.projected.values, q) - schatten_norm(r.full.values, q);
        r.max_violation = std::max(r.max_violation, gap);
        if (gap > kSpectralTolerance)
            r.schatten_contraction_ok = false;
    }
    return r;
}

template Spectrum spectrum(const MarkovSpace<double>&);
template Spectrum spectrum(const MarkovSpace<Rational>&);
template double cycle_density_spectral(const MarkovSpace<double>&, int);
template double cycle_density_spectral(const MarkovSpace<Rational>&, int);
template double schatten_norm(const MarkovSpace<double>&, double);
template double schatten_norm(const MarkovSpace<Rational>&, double);
template ProjectionReport projected_spectrum_check(const MarkovSpace<double>&, const Partition&);
template ProjectionReport projected_spectrum_check(const MarkovSpace<Rational>&, const Partition&);

// --- convolution-log ----------------------------------------------------------------

double convolution_profile(double x) {
    const double u = 2.0 - std::log(x);
    return 1.0 / (x * u * u);
}

namespace {

constexpr double kHeadSplit = 1e-3;

// Integral over (0, kHeadSplit] after x = e^(2-u): cos(k pi e^(2-u)) / u^2 du
// on [2 - ln(split), inf). Beyond U the cosine equals 1 to within 1e-12 and
// the remaining tail is 1/U.
double head_integral(int k) {
    const double u0 = 2.0 - std::log(kHeadSplit);
    if (k == 0)
        return 1.0 / u0;
    const double kp = k * std::numbers::pi;
    // k pi e^(2 - U) <= 1e-6 gives 1 - cos <= 5e-13.
    const double u1 = std::max(u0, 2.0 + std::log(kp / 1e-6));
    const auto g = [kp](double u) {
        const double c = std::cos(kp * std::exp(2.0 - u));
        return c / (u * u);
    };
    const auto res = quad::gauss_kronrod(g, u0, u1, 1e-13, 0.0, 4000);
    return res.value + 1.0 / u1;
}

double body_integral(int k) {
    const auto g = [k](double x) { return convolution_profile(x) * std::cos(k * std::numbers::pi * x); };
    if (k == 0)
        return quad::gauss_kronrod(g, kHeadSplit, 1.0, 1e-13, 0.0, 4000).value;
    // Split at multiples of 1/k so every piece holds half a period.
    const double step = 1.0 / k;
    double acc = 0.0;
    double a = kHeadSplit;
    for (int j = static_cast<int>(std::floor(kHeadSplit * k)) + 1; a < 1.0; ++j) {
        const double b = std::min(1.0, j * step);
        if (b > a)
            acc += quad::gauss_kronrod(g, a, b, 1e-14, 0.0, 200).value;
        a = b;
    }
    return acc;
}

} // namespace

double convolution_eigenvalue(int k) {
    if (k < 0 || k > 4096)
        throw ValidationError("convolution eigenvalue index must be in [0, 4096]");
    return head_integral(k) + body_integral(k);
}

double convolution_lower_bound(int k) {
    if (k < 1)
        return std::numeric_limits<double>::quiet_NaN();
    return 1.0 / (4.0 * std::numbers::sqrt2 * (2.0 + std::log(4.0 * k)));
}

ConvolutionReport convolution_report(int k_max, const std::vector<int>& powers) {
    if (k_max < 0 || k_max > 4096)
        throw ValidationError("k_max must be in [0, 4096]");
    ConvolutionReport r;
    const auto lambdas =
        parallel_map<double>(static_cast<std::size_t>(k_max) + 1, [](std::size_t k) { return convolution_eigenvalue(static_cast<int>(k)); });
    for (int k = 0; k <= k_max; ++k) {
        const double lb = convolution_lower_bound(k);
        r.rows.push_back({k, lambdas[static_cast<std::size_t>(k)], lb, lambdas[static_cast<std::size_t>(k)] / lb});
    }
    for (int power : powers) {
        PartialSums ps;
        ps.power = power;
        double acc = 0.0;
        int next = 0;
        for (int cp : {64, 256, 1024, 4096}) {
            if (cp > k_max)
                break;
            for (; next <= cp; ++next)
                acc += std::pow(lambdas[static_cast<std::size_t>(next)], power);
            if (!ps.sums.empty() && !(acc - ps.sums.back() > kPlateauTolerance))
                ps.strictly_increasing = false;
            ps.checkpoints.push_back(cp);
            ps.sums.push_back(acc);
        }
        r.partial_sums.push_back(std::move(ps));
    }
    return r;
}

} // namespace xlab
