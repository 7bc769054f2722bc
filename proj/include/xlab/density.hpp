#pragma once

// Homomorphism densities t(G, W) and homomorphism measures W^G * pi^V on
// finite Markov spaces, computed with the variable-elimination engine.

#include "xlab/factor.hpp"
#include "xlab/graph.hpp"
#include "xlab/space.hpp"

#include <optional>
#include <vector>

namespace xlab {

struct DensityOptions {
    /// Divide by t(K_2)^|E|. For a valid space t(K_2) = 1; this is checked.
    bool normalized = false;
    EngineOptions engine{};
};

template <class T>
struct DensityResult {
    T value;
    int width = 0;
};

/// Factors of W^G * pi^V: one unary pi factor per vertex and one W factor per edge.
template <class T>
std::vector<Factor<T>> density_factors(const Graph& g, const MarkovSpace<T>& s);

template <class T>
DensityResult<T> density_detailed(const Graph& g, const MarkovSpace<T>& s, const DensityOptions& options = {});

template <class T>
T density(const Graph& g, const MarkovSpace<T>& s, const DensityOptions& options = {}) {
    return density_detailed(g, s, options).value;
}

/// Bigraph density on the underlying graph (finite spaces are symmetric).
template <class T>
T density(const Bigraph& g, const MarkovSpace<T>& s, const DensityOptions& options = {}) {
    return density_detailed(g.underlying(), s, options).value;
}

/// Densities of many patterns in one space, evaluated in parallel.
template <class T>
std::vector<T> density_batch(const std::vector<Graph>& patterns, const MarkovSpace<T>& s,
                             const DensityOptions& options = {});

/// |hom(g, h)|: chromatic polynomial when h is complete, else brute force.
BigInt hom_count(const Graph& g, const Graph& h);

/// t*(g, h) = hom(g, h) p^(2b - a) / (2q)^b for h with p vertices, q >= 1 edges.
Rational normalized_density_finite_graph(const Graph& g, const Graph& h);

inline constexpr double kMaterializeLimit = 1e7;
inline constexpr double kMarginalLimit = 1e6;

/// The measure W^G * pi^V in factored form.
template <class T>
class HomMeasure {
public:
    HomMeasure(Graph g, MarkovSpace<T> s, EngineOptions engine = {});

    const Graph& pattern() const noexcept { return g_; }
    const MarkovSpace<T>& space() const noexcept { return s_; }
    const std::vector<Factor<T>>& factors() const noexcept { return factors_; }

    T total_mass() const;
    /// Weight of one map V -> [n].
    T weight(std::span<const int> map) const;
    /// Dense table over [n]^V (vertex 0 slowest); n^|V| <= 1e7.
    std::vector<T> materialize() const;
    /// Marginal on `subset` (in the given order); n^|subset| <= 1e6.
    std::vector<T> marginal(std::span<const int> subset) const;

private:
    Graph g_;
    MarkovSpace<T> s_;
    EngineOptions engine_;
    std::vector<Factor<T>> factors_;
};

template <class T>
HomMeasure<T> hom_measure(const Graph& g, const MarkovSpace<T>& s) {
    return HomMeasure<T>(g, s);
}

/// s_k over [n]^k: s_k(y) = sum_x pi[x] prod_j W[x][y_j].
template <class T>
struct SkTable {
    int k = 0;
    std::size_t n = 0;
    std::vector<T> values; // row-major, y_1 slowest

    const T& at(std::span<const int> y) const;
};

template <class T>
SkTable<T> s_table(const MarkovSpace<T>& s, int k);

/// ||s_k||_p^(1/k) in L^p(pi^k); 1 for k = 1.
template <class T>
double kp_norm(const MarkovSpace<T>& s, int k, int p);

/// t(G) = sum over x in [n]^U of pi^U(x) prod_w s_deg(w)(x|N(w)).
template <class T>
T bigraph_density_via_s(const Bigraph& g, const MarkovSpace<T>& s);

/// Factor system for the Finner inequality: variables 0..var_count-1 over
/// [n], each distributed by pi.
struct FinnerSystem {
    std::size_t n = 0;
    std::vector<double> pi;
    int var_count = 0;
    std::vector<Factor<double>> factors;
};

struct FinnerResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

FinnerResult finner_check(const FinnerSystem& system, int p);

struct FamilyReport {
    bool decreasing_ok = true;
    bool markov_ok = true;
    double max_residual = 0.0;
    int separations_checked = 0;
};

inline constexpr double kSupportThreshold = 1e-14;
inline constexpr double kMarkovTolerance = 1e-10;

template <class T>
FamilyReport check_family(const Graph& g, const MarkovSpace<T>& s);

} // namespace xlab
