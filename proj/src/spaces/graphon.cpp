#include "xlab/graphon.hpp"

#include "xlab/errors.hpp"
#include "xlab/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace xlab {

double GraphonSpec::param(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end())
        throw ValidationError("graphon '" + name + "' requires parameter '" + key + "'");
    return it->second;
}

double GraphonSpec::param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

const std::vector<std::string>& graphon_names() {
    static const std::vector<std::string> names = {"constant", "bilinear", "noncompact-blocks", "lp-blocks",
                                                   "convolution-log"};
    return names;
}

namespace {

long integer_param(const GraphonSpec& spec, const std::string& key, long lo, long hi) {
    const double v = spec.param(key);
    if (v != std::floor(v) || v < static_cast<double>(lo) || v > static_cast<double>(hi))
        throw ValidationError("parameter '" + key + "' of '" + spec.name + "' must be an integer in [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<long>(v);
}

constexpr long kMaxAtoms = 4096;

// Integral of the odd profile F0(t) = sign(t) / (2 - ln|t|) from 0 to |t|,
// valid on [-1, 1]: e^2 E1(2 - ln|t|).
double g0(double t) {
    t = std::abs(t);
    if (t == 0.0)
        return 0.0;
    const double u = 2.0 - std::log(t);
    return -std::exp(2.0) * std::expint(-u);
}

// H(t) = integral of F from 0 to t on [-2, 2].
double h_integral(double t) {
    if (t < 0)
        return h_integral(-t);
    if (t <= 1.0)
        return g0(t);
    return (t - 1.0) + g0(2.0 - t);
}

template <class T>
SquareMatrix<T> bilinear_cells(long n) {
    SquareMatrix<T> m(static_cast<std::size_t>(n));
    const T h = ratio<T>(1, n);
    std::vector<T> c(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
        c[static_cast<std::size_t>(i)] = h * (T(2 * i + 1) * h - T(1));
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j)
            m(i, j) = h * h + c[i] * c[j];
    return m;
}

template <class T>
SquareMatrix<T> noncompact_cells(long k_max) {
    SquareMatrix<T> m(static_cast<std::size_t>(k_max + 1), T(0));
    T mass = 1;
    for (long k = 1; k <= k_max; ++k) {
        mass /= 2;
        m(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(k - 1)) = mass;
    }
    m(static_cast<std::size_t>(k_max), static_cast<std::size_t>(k_max)) = mass;
    return m;
}

SquareMatrix<double> lp_cells(double eps, long blocks) {
    if (!(eps >= 0.0 && eps < 1.0))
        throw ValidationError("lp-blocks requires 0 <= eps < 1");
    SquareMatrix<double> m(static_cast<std::size_t>(blocks), 0.0);
    const double exponent = -2.0 / (1.0 - eps);
    for (long b = 0; b < blocks; ++b)
        m(static_cast<std::size_t>(b), static_cast<std::size_t>(b)) = std::pow(static_cast<double>(b + 1), exponent);
    return m;
}

SquareMatrix<double> convolution_cells(long n) {
    // Cells of width h on [-1, 1]; the mass of a cell pair depends only on the
    // cyclic offset d and equals H(c + h) - 2H(c) + H(c - h) with c = d h.
    const double h = 2.0 / static_cast<double>(n);
    std::vector<double> by_offset(static_cast<std::size_t>(n));
    for (long d = 0; d <= n / 2; ++d) {
        const double c = static_cast<double>(d) * h;
        const double v = (h_integral(c + h) - h_integral(c)) - (h_integral(c) - h_integral(c - h));
        by_offset[static_cast<std::size_t>(d)] = v;
        by_offset[static_cast<std::size_t>((n - d) % n)] = v;
    }
    SquareMatrix<double> m(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                by_offset[static_cast<std::size_t>(((j - i) % n + n) % n)];
    return m;
}

} // namespace

double convolution_log_antiderivative(double t) {
    const double m = std::round(t / 2.0);
    const double r = t - 2.0 * m;
    const double f0 = r == 0.0 ? 0.0 : std::copysign(1.0 / (2.0 - std::log(std::abs(r))), r);
    return f0 + m;
}

template <class T>
MarkovSpace<T> discretize_graphon(const GraphonSpec& spec) {
    const auto& name = spec.name;
    if (name == "constant") {
        const long n = integer_param(spec, "atoms", 1, kMaxAtoms);
        return MarkovSpace<T>::from_matrix(SquareMatrix<T>(static_cast<std::size_t>(n), T(1)), true);
    }
    if (name == "bilinear")
        return MarkovSpace<T>::from_matrix(bilinear_cells<T>(integer_param(spec, "atoms", 1, kMaxAtoms)), true);
    if (name == "noncompact-blocks")
        return MarkovSpace<T>::from_matrix(noncompact_cells<T>(integer_param(spec, "K", 1, 60)), true);
    if (name == "lp-blocks" || name == "convolution-log") {
        if constexpr (is_exact_v<T>) {
            throw ValidationError("graphon '" + name + "' is only available in f64 mode");
        } else {
            if (name == "lp-blocks")
                return FloatSpace::from_matrix(
                    lp_cells(spec.param("eps"), integer_param(spec, "blocks", 1, kMaxAtoms)), true);
            return FloatSpace::from_matrix(convolution_cells(integer_param(spec, "atoms", 1, kMaxAtoms)), true);
        }
    }
    throw ValidationError("unknown graphon '" + name + "'");
}

template MarkovSpace<double> discretize_graphon(const GraphonSpec&);
template MarkovSpace<Rational> discretize_graphon(const GraphonSpec&);

FloatSpace discretize_kernel(const std::function<double(double, double)>& w, std::size_t atoms) {
    if (atoms == 0)
        throw ValidationError("discretization needs at least one atom");
    const auto& rule = quad::gauss_legendre_rule(32);
    const double h = 1.0 / static_cast<double>(atoms);
    SquareMatrix<double> m(atoms);
    for (std::size_t i = 0; i < atoms; ++i) {
        for (std::size_t j = i; j < atoms; ++j) {
            double acc = 0.0;
            for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
                const double x = h * (static_cast<double>(i) + 0.5 * (1.0 + rule.nodes[a]));
                for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
                    const double y = h * (static_cast<double>(j) + 0.5 * (1.0 + rule.nodes[b]));
                    acc += rule.weights[a] * rule.weights[b] * w(x, y);
                }
            }
            m(i, j) = m(j, i) = acc * 0.25 * h * h;
        }
    }
    return FloatSpace::from_matrix(std::move(m), true);
}

} // namespace xlab
