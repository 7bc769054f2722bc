#pragma once

// Sequential constructions of homomorphism measures: random tree maps,
// star-decomposition measures, order-independence checks and the
// orthogonality-space K_{2,2} sampler.

#include "xlab/graph.hpp"
#include "xlab/space.hpp"
#include "xlab/sphere.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace xlab {

/// Distribution of a random homomorphism of `t` built along a search order:
/// the root follows pi, every later vertex takes a Markov step from its
/// earlier neighbor. Dense over [n]^V, vertex 0 slowest.
template <class T>
std::vector<T> tree_distribution(const Tree& t, const MarkovSpace<T>& s, std::span<const int> order);

struct StarStep {
    int center = -1;
    std::vector<int> leaves;
    /// max over leaf tuples of |sum_x psi_z(x) - s_deg(z)| against the s_k table.
    double psi_normalization_defect = 0.0;
    /// Leaf tuples reached with positive rho mass but s(z) below threshold.
    long null_tuples = 0;
};

template <class T>
struct SeqMeasureTrace {
    std::vector<int> order;
    std::vector<StarStep> steps;
    std::vector<T> rho;   // sampling distribution, [n]^V with vertex 0 slowest
    std::vector<T> f;     // product of s(z) along the steps
    std::vector<T> eta;   // f * rho
};

inline constexpr double kNullMassThreshold = 1e-14;

/// eta_p for the star decomposition along `order`. Requires a triangle-free
/// pattern and n^|V| <= 1e6.
template <class T>
SeqMeasureTrace<T> sequential_star_measure(const Graph& g, const MarkovSpace<T>& s, std::span<const int> order);

struct OrderRow {
    std::vector<int> order;
    double total_mass = 0.0;
    double deviation = 0.0;        // against the identity order
    double deviation_vs_hom = 0.0;
    long null_tuples = 0;
};

struct OrderReport {
    std::vector<OrderRow> rows;
    double max_deviation = 0.0;        // across orders
    double max_deviation_vs_hom = 0.0; // against W^G * pi^V from the density engine
    int orders_tested = 0;
};

/// Identity, reverse and `n_orders` seeded random permutations.
template <class T>
OrderReport order_independence_report(const Graph& g, const MarkovSpace<T>& s, int n_orders, std::uint64_t seed);

/// Maps the vertices of `g` one by one onto S^{d-1}, each uniform on the
/// subsphere orthogonal to its earlier neighbors' images. nullopt when the
/// anchors of some vertex span R^d.
std::optional<std::vector<Vec>> sphere_sequential_sample(const Graph& g, int d, std::span<const int> order,
                                                         std::mt19937_64& rng);
std::optional<std::vector<Vec>> sphere_sequential_sample(const Graph& g, int d, std::span<const int> order,
                                                         std::uint64_t seed);

struct K22Result {
    int d = 3;
    std::vector<double> order_a; // <u1, u2>, order (u1, u2, v1, v2); NaN when degenerate
    std::vector<double> order_b; // <u1, u2>, order (u1, v1, v2, u2)
    std::vector<long> hist_a;    // 40 bins of width 0.05 on [-1, 1]
    std::vector<long> hist_b;
    double ks_vs_uniform = 0.0;  // order A against Uniform[-1, 1]
    double mass_at_one = 0.0;    // order B fraction with |<u1, u2>| > 1 - 1e-6
    long degenerate = 0;
};

K22Result k22_order_experiment(int d, long n_samples, std::uint64_t seed);

/// `order,sample_index,inner_product` rows, A then B, LF endings.
std::string k22_csv(const K22Result& r);

/// Kolmogorov-Smirnov statistic of `samples` against Uniform[lo, hi].
double ks_uniform(std::vector<double> samples, double lo, double hi);

} // namespace xlab
