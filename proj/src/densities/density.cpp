#include "xlab/density.hpp"

#include "xlab/errors.hpp"
#include "xlab/kernels.hpp"
#include "xlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace xlab {

template <class T>
std::vector<Factor<T>> density_factors(const Graph& g, const MarkovSpace<T>& s) {
    const auto w = step_graphon(s).w;
    std::vector<Factor<T>> out;
    out.reserve(static_cast<std::size_t>(g.vertex_count() + g.edge_count()));
    for (int v = 0; v < g.vertex_count(); ++v)
        out.push_back({{v}, s.pi()});
    for (const auto& [u, v] : g.edges())
        out.push_back({{u, v}, w.data()});
    return out;
}

namespace {

template <class T>
void assert_unit_edge_density(const MarkovSpace<T>& s) {
    T total = 0;
    for (const auto& v : s.eta().data())
        total += v;
    if constexpr (is_exact_v<T>) {
        if (total != 1)
            throw ValidationError("t(K_2) = " + to_string(total) + " is not 1");
    } else {
        if (std::abs(total - 1.0) > kMassTolerance)
            throw ValidationError("t(K_2) = " + format_double(total) + " is not 1");
    }
}

} // namespace

template <class T>
DensityResult<T> density_detailed(const Graph& g, const MarkovSpace<T>& s, const DensityOptions& options) {
    if (options.normalized)
        assert_unit_edge_density(s);
    ContractionStats stats;
    auto f = contract(density_factors(g, s), g.vertex_count(), s.size(), {}, options.engine, &stats);
    return {std::move(f.table[0]), stats.induced_width};
}

template <class T>
std::vector<T> density_batch(const std::vector<Graph>& patterns, const MarkovSpace<T>& s,
                             const DensityOptions& options) {
    return parallel_map<T>(patterns.size(), [&](std::size_t i) { return density(patterns[i], s, options); });
}

BigInt hom_count(const Graph& g, const Graph& h) {
    const long p = h.vertex_count();
    if (h.edge_count() == p * (p - 1) / 2 && g.edge_count() <= kChromaticEdgeBudget)
        return chromatic_polynomial(g).evaluate(p);
    return count_homomorphisms_brute_force(g, h);
}

Rational normalized_density_finite_graph(const Graph& g, const Graph& h) {
    if (h.edge_count() == 0)
        throw ValidationError("normalized density needs a target with at least one edge");
    const long a = g.vertex_count();
    const long b = g.edge_count();
    const long p = h.vertex_count();
    const long q = h.edge_count();
    Rational out(hom_count(g, h));
    BigInt pp;
    mpz_ui_pow_ui(pp.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::abs(2 * b - a)));
    if (2 * b - a >= 0)
        out *= pp;
    else
        out /= pp;
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(2 * q), static_cast<unsigned long>(b));
    out /= den;
    out.canonicalize();
    return out;
}

// --- HomMeasure ---------------------------------------------------------------

template <class T>
HomMeasure<T>::HomMeasure(Graph g, MarkovSpace<T> s, EngineOptions engine)
    : g_(std::move(g)), s_(std::move(s)), engine_(engine), factors_(density_factors(g_, s_)) {}

template <class T>
T HomMeasure<T>::total_mass() const {
    return contract(factors_, g_.vertex_count(), s_.size(), {}, engine_).table[0];
}

template <class T>
T HomMeasure<T>::weight(std::span<const int> map) const {
    if (static_cast<int>(map.size()) != g_.vertex_count())
        throw ValidationError("map length does not match the pattern");
    const std::size_t n = s_.size();
    T out = 1;
    for (const auto& f : factors_) {
        std::size_t idx = 0;
        for (int v : f.scope)
            idx = idx * n + static_cast<std::size_t>(map[static_cast<std::size_t>(v)]);
        out *= f.table[idx];
    }
    return out;
}

template <class T>
std::vector<T> HomMeasure<T>::marginal(std::span<const int> subset) const {
    const double size = table_volume(s_.size(), subset.size());
    if (size > kMarginalLimit && static_cast<int>(subset.size()) != g_.vertex_count())
        throw BudgetError("marginal table of " + format_double(size) + " entries exceeds the 1e6 limit");
    if (size > kMaterializeLimit)
        throw BudgetError("measure table of " + format_double(size) + " entries exceeds the 1e7 limit");
    EngineOptions opts = engine_;
    opts.budget = std::max(opts.budget, size);
    return contract(factors_, g_.vertex_count(), s_.size(), subset, opts).table;
}

template <class T>
std::vector<T> HomMeasure<T>::materialize() const {
    std::vector<int> all(static_cast<std::size_t>(g_.vertex_count()));
    std::iota(all.begin(), all.end(), 0);
    return marginal(all);
}

// --- s_k and norms ------------------------------------------------------------

template <class T>
const T& SkTable<T>::at(std::span<const int> y) const {
    std::size_t idx = 0;
    for (int v : y)
        idx = idx * n + static_cast<std::size_t>(v);
    return values.at(idx);
}

namespace {

template <class T>
void fill_sk(const SquareMatrix<T>& w, int depth, int k, const std::vector<T>& partial, std::size_t prefix,
             std::vector<T>& out) {
    const std::size_t n = w.size();
    if (depth == k - 1) {
        for (std::size_t y = 0; y < n; ++y)
            out[prefix * n + y] = kernels::dot(std::span<const T>(partial), w.row(y));
        return;
    }
    std::vector<T> next(n);
    for (std::size_t y = 0; y < n; ++y) {
        kernels::mul(std::span<const T>(partial), w.row(y), std::span<T>(next));
        fill_sk(w, depth + 1, k, next, prefix * n + y, out);
    }
}

} // namespace

template <class T>
SkTable<T> s_table(const MarkovSpace<T>& s, int k) {
    if (k < 0 || k > 4)
        throw ValidationError("s_k tables are available for 0 <= k <= 4");
    const std::size_t n = s.size();
    const double size = table_volume(n, static_cast<std::size_t>(k));
    if (size > kMarginalLimit)
        throw BudgetError("s_k table of " + format_double(size) + " entries exceeds the 1e6 limit");
    SkTable<T> out{k, n, std::vector<T>(static_cast<std::size_t>(size))};
    if (k == 0) {
        out.values[0] = kernels::sum(std::span<const T>(s.pi()));
        return out;
    }
    const auto w = step_graphon(s).w;
    fill_sk(w, 0, k, s.pi(), 0, out.values);
    return out;
}

template <class T>
double kp_norm(const MarkovSpace<T>& s, int k, int p) {
    if (k < 1 || p < 1)
        throw ValidationError("(k,p)-norm needs k >= 1 and p >= 1");
    if (k == 1)
        return 1.0;
    const auto table = s_table(s, k);
    const std::size_t n = s.size();
    std::vector<double> pi(n);
    for (std::size_t i = 0; i < n; ++i)
        pi[i] = to_double(s.pi()[i]);
    double acc = 0.0;
    std::vector<std::size_t> digits(static_cast<std::size_t>(k), 0);
    for (const auto& v : table.values) {
        double weight = 1.0;
        for (auto d : digits)
            weight *= pi[d];
        acc += weight * std::pow(to_double(v), p);
        for (std::size_t j = digits.size(); j-- > 0;) {
            if (++digits[j] < n)
                break;
            digits[j] = 0;
        }
    }
    return std::pow(acc, 1.0 / (static_cast<double>(k) * p));
}

template <class T>
T bigraph_density_via_s(const Bigraph& g, const MarkovSpace<T>& s) {
    std::vector<std::optional<SkTable<T>>> tables(5);
    std::vector<Factor<T>> factors;
    for (int u = 0; u < g.left_count(); ++u)
        factors.push_back({{u}, s.pi()});
    for (int w = 0; w < g.right_count(); ++w) {
        const auto nb = g.right_neighbors(w);
        const auto deg = nb.size();
        if (deg == 0)
            continue;
        if (deg > 4)
            throw ValidationError("right-class degree above 4 is not supported");
        if (!tables[deg])
            tables[deg] = s_table(s, static_cast<int>(deg));
        factors.push_back({nb, tables[deg]->values});
    }
    EngineOptions opts;
    opts.budget = std::max(opts.budget, kMarginalLimit);
    return contract(std::move(factors), g.left_count(), s.size(), {}, opts).table[0];
}

// --- Finner -------------------------------------------------------------------

FinnerResult finner_check(const FinnerSystem& sys, int p) {
    if (p < 1)
        throw ValidationError("Finner exponent must be at least 1");
    if (sys.pi.size() != sys.n)
        throw ValidationError("Finner system: pi has the wrong length");
    std::vector<int> multiplicity(static_cast<std::size_t>(sys.var_count), 0);
    for (const auto& f : sys.factors)
        for (int v : f.scope)
            if (++multiplicity.at(static_cast<std::size_t>(v)) > p)
                throw ValidationError("variable " + std::to_string(v) + " appears in more than p = " +
                                      std::to_string(p) + " factors");

    std::vector<Factor<double>> all = sys.factors;
    for (int v = 0; v < sys.var_count; ++v)
        all.push_back({{v}, sys.pi});
    FinnerResult out;
    out.lhs = contract(std::move(all), sys.var_count, sys.n, {}).table[0];

    out.rhs = 1.0;
    for (const auto& f : sys.factors) {
        double acc = 0.0;
        std::vector<std::size_t> digits(f.scope.size(), 0);
        for (double v : f.table) {
            double weight = 1.0;
            for (auto d : digits)
                weight *= sys.pi[d];
            acc += weight * std::pow(v, p);
            for (std::size_t j = digits.size(); j-- > 0;) {
                if (++digits[j] < sys.n)
                    break;
                digits[j] = 0;
            }
        }
        out.rhs *= std::pow(acc, 1.0 / p);
    }
    out.holds = out.lhs <= out.rhs + 1e-12;
    return out;
}

// --- Family checks -------------------------------------------------------------

namespace {

std::vector<int> mask_vertices(unsigned mask) {
    std::vector<int> out;
    for (int v = 0; mask >> v; ++v)
        if (mask >> v & 1U)
            out.push_back(v);
    return out;
}

// Index of the restriction of a tuple over `from` (ascending vertices) to `to`.
std::size_t restrict_index(std::span<const int> digits, unsigned from, unsigned to, std::size_t n) {
    std::size_t idx = 0;
    std::size_t pos = 0;
    for (int v = 0; from >> v; ++v) {
        if (!(from >> v & 1U))
            continue;
        if (to >> v & 1U)
            idx = idx * n + static_cast<std::size_t>(digits[pos]);
        ++pos;
    }
    return idx;
}

} // namespace

template <class T>
FamilyReport check_family(const Graph& g, const MarkovSpace<T>& s) {
    const int nv = g.vertex_count();
    const std::size_t n = s.size();
    if (nv > 20 || table_volume(n, static_cast<std::size_t>(nv)) > kMarginalLimit)
        throw BudgetError("family check needs n^|V| <= 1e6");
    const unsigned full = (1U << nv) - 1U;

    std::vector<std::vector<T>> mu(full + 1U);
    for (unsigned mask = 0; mask <= full; ++mask) {
        const auto verts = mask_vertices(mask);
        if (verts.empty()) {
            mu[mask] = {T(1)};
            continue;
        }
        mu[mask] = HomMeasure<T>(g.induced(verts), s).materialize();
    }

    FamilyReport report;
    auto positive = [](const T& v) { return to_double(v) > kSupportThreshold; };

    // Decreasing: the S-marginal of mu_T is supported inside supp(mu_S).
    for (unsigned t = 1; t <= full; ++t) {
        const auto tv = mask_vertices(t);
        for (unsigned sub = (t - 1) & t;; sub = (sub - 1) & t) {
            std::vector<T> marg(mu[sub].size(), T(0));
            std::vector<int> digits(tv.size(), 0);
            for (const auto& v : mu[t]) {
                marg[restrict_index(digits, t, sub, n)] += v;
                for (std::size_t j = digits.size(); j-- > 0;) {
                    if (++digits[j] < static_cast<int>(n))
                        break;
                    digits[j] = 0;
                }
            }
            for (std::size_t i = 0; i < marg.size(); ++i)
                if (positive(marg[i]) && !positive(mu[sub][i]))
                    report.decreasing_ok = false;
            if (sub == 0)
                break;
        }
    }

    // Markov: mu_{U+W} mu_S = mu_U mu_W whenever no edge joins U\S and W\S.
    for (unsigned u = 1; u <= full; ++u) {
        for (unsigned w = u + 1; w <= full; ++w) {
            const unsigned sep = u & w;
            if (sep == u || sep == w)
                continue;
            const unsigned only_u = u & ~sep;
            const unsigned only_w = w & ~sep;
            bool separated = true;
            for (const auto& [a, b] : g.edges()) {
                const bool ua = only_u >> a & 1U, ub = only_u >> b & 1U;
                const bool wa = only_w >> a & 1U, wb = only_w >> b & 1U;
                if ((ua && wb) || (ub && wa))
                    separated = false;
            }
            if (!separated)
                continue;
            ++report.separations_checked;
            const unsigned joint = u | w;
            std::vector<int> digits(mask_vertices(joint).size(), 0);
            for (const auto& m : mu[joint]) {
                const T& ms = mu[sep][restrict_index(digits, joint, sep, n)];
                if (positive(ms)) {
                    const T lhs = m / ms;
                    const T rhs = (mu[u][restrict_index(digits, joint, u, n)] / ms) *
                                  (mu[w][restrict_index(digits, joint, w, n)] / ms);
                    const double lhs_d = to_double(lhs);
                    const double r = std::abs(to_double(T(lhs - rhs))) / std::max(1.0, std::abs(lhs_d));
                    report.max_residual = std::max(report.max_residual, r);
                }
                for (std::size_t j = digits.size(); j-- > 0;) {
                    if (++digits[j] < static_cast<int>(n))
                        break;
                    digits[j] = 0;
                }
            }
        }
    }
    report.markov_ok = report.max_residual <= kMarkovTolerance;
    return report;
}

#define XLAB_INSTANTIATE(T)                                                                                  \
    template std::vector<Factor<T>> density_factors(const Graph&, const MarkovSpace<T>&);                    \
    template DensityResult<T> density_detailed(const Graph&, const MarkovSpace<T>&, const DensityOptions&);  \
    template std::vector<T> density_batch(const std::vector<Graph>&, const MarkovSpace<T>&,                  \
                                          const DensityOptions&);                                            \
    template class HomMeasure<T>;                                                                            \
    template struct SkTable<T>;                                                                              \
    template SkTable<T> s_table(const MarkovSpace<T>&, int);                                                 \
    template double kp_norm(const MarkovSpace<T>&, int, int);                                                \
    template T bigraph_density_via_s(const Bigraph&, const MarkovSpace<T>&);                                 \
    template FamilyReport check_family(const Graph&, const MarkovSpace<T>&);

XLAB_INSTANTIATE(double)
XLAB_INSTANTIATE(Rational)

#undef XLAB_INSTANTIATE

} // namespace xlab
