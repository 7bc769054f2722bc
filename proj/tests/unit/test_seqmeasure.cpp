#include "test_support.hpp"
#include "xlab/density.hpp"
#include "xlab/errors.hpp"
#include "xlab/seqmeasure.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace xlab;

namespace {

template <class T>
MarkovSpace<T> k_space(int n) {
    const Graph k = complete_graph(n);
    return graph_space<T>(n, k.edges());
}

Rational q(long a, long b) { return ratio<Rational>(a, b); }

template <class T>
double max_diff(const std::vector<T>& a, const std::vector<T>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(to_double(T(a[i] - b[i]))));
    return d;
}

} // namespace

TEST_CASE("tree distribution examples") {
    std::mt19937_64 rng(1);
    const auto s = random_exact_space(3, rng);
    const std::vector<int> edge_order{0, 1};
    CHECK(tree_distribution(Tree::path(2), s, edge_order) == s.eta().data());
    const std::vector<int> single{0};
    CHECK(tree_distribution(Tree(Graph(1)), s, single) == s.pi());

    const std::vector<int> star_order{0, 1, 2};
    const auto s2 = tree_distribution(Tree::star(2), k_space<Rational>(2), star_order);
    // index = center * 4 + leaf1 * 2 + leaf2
    std::vector<Rational> expected(8, Rational(0));
    expected[0 * 4 + 1 * 2 + 1] = q(1, 2);
    expected[1 * 4 + 0 * 2 + 0] = q(1, 2);
    CHECK(s2 == expected);

    const std::vector<int> bad{0, 2, 1};
    CHECK_THROWS_AS(tree_distribution(Tree::path(3), s, bad), Error);
}

TEST_CASE("tree distributions agree over all search orders of all small trees") {
    std::mt19937_64 rng(2);
    for (int n = 1; n <= 5; ++n)
        for (const Graph& g : trees_up_to_isomorphism(n)) {
            const Tree t(g);
            const auto s = random_exact_space(3, rng);
            const auto orders = all_search_orders(t);
            const auto reference = tree_distribution(t, s, orders.front());
            CHECK(reference == testing::brute_hom_table(g, s));
            for (const auto& order : orders)
                CHECK(tree_distribution(t, s, order) == reference);
        }
}

TEST_CASE("sequential star measure examples") {
    const auto k2 = k_space<Rational>(2);
    const std::vector<int> order{0, 1, 2, 3};
    const auto trace = sequential_star_measure(cycle_graph(4), k2, order);
    Rational total = 0;
    for (const auto& v : trace.eta)
        total += v;
    CHECK(total == 2);
    CHECK(trace.eta == HomMeasure<Rational>(cycle_graph(4), k2).materialize());

    std::mt19937_64 rng(3);
    const auto s = random_exact_space(3, rng);
    const std::vector<int> forward{0, 1, 2, 3}, backward{3, 2, 1, 0};
    CHECK(sequential_star_measure(path_graph(4), s, forward).eta ==
          sequential_star_measure(path_graph(4), s, backward).eta);

    const Graph k23 = complete_bigraph(2, 3).underlying();
    const auto f = random_space(4, rng, 0.0);
    const std::vector<int> u_first{0, 1, 2, 3, 4}, w_first{2, 3, 4, 0, 1};
    const auto a = sequential_star_measure(k23, f, u_first).eta;
    const auto b = sequential_star_measure(k23, f, w_first).eta;
    CHECK(max_diff(a, b) <= 1e-12);
    CHECK(max_diff(a, testing::brute_hom_table(k23, f)) <= 1e-12);

    CHECK_THROWS_AS(sequential_star_measure(complete_graph(3), s, std::vector<int>{0, 1, 2}), PreconditionError);
}

TEST_CASE("sequential measure factors and normalization") {
    std::mt19937_64 rng(4);
    const auto s = random_space(3, rng, 0.3);
    const Graph g = cycle_graph(5);
    const std::vector<int> order{2, 0, 4, 1, 3};
    const auto trace = sequential_star_measure(g, s, order);
    double rho = 0.0, eta = 0.0;
    for (std::size_t i = 0; i < trace.eta.size(); ++i) {
        rho += trace.rho[i];
        eta += trace.eta[i];
        CHECK(std::abs(trace.eta[i] - trace.f[i] * trace.rho[i]) <= 1e-15);
    }
    CHECK(rho == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(eta - density(g, s)) <= 1e-12);
    for (const auto& step : trace.steps)
        CHECK(step.psi_normalization_defect <= 1e-12);
    CHECK(trace.order == order);
}

TEST_CASE("null tuples are recorded and skipped") {
    const auto k2 = k_space<Rational>(2);
    const Graph c4 = cycle_graph(4);
    const std::vector<int> order{0, 2, 1, 3};
    const auto trace = sequential_star_measure(c4, k2, order);
    long nulls = 0;
    for (const auto& step : trace.steps)
        nulls += step.null_tuples;
    CHECK(nulls > 0);
    CHECK(trace.eta == HomMeasure<Rational>(c4, k2).materialize());
}

TEST_CASE("order independence reports") {
    std::mt19937_64 rng(5);
    const auto s = random_space(5, rng, 0.2);
    const auto rep = order_independence_report(cycle_graph(5), s, 20, 77);
    CHECK(rep.orders_tested == 22);
    CHECK(rep.rows.size() == 22);
    CHECK(rep.max_deviation <= 1e-12);
    CHECK(rep.max_deviation_vs_hom <= 1e-12);

    const auto exact = order_independence_report(path_graph(4), random_exact_space(3, rng), 10, 1);
    CHECK(exact.max_deviation == 0.0);
    CHECK(exact.max_deviation_vs_hom == 0.0);
}

TEST_CASE("sphere sequential sampling") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        for (const Graph& tree : trees_up_to_isomorphism(5)) {
            std::vector<int> order(5);
            std::iota(order.begin(), order.end(), 0);
            const auto images = sphere_sequential_sample(tree, 3, order, seed);
            REQUIRE(images.has_value());
            for (const auto& [u, v] : tree.edges())
                CHECK(std::abs(inner((*images)[static_cast<std::size_t>(u)], (*images)[static_cast<std::size_t>(v)])) <=
                      1e-9);
        }
        const Graph c4 = cycle_graph(4);
        // u1 = 0, v1 = 1, u2 = 2, v2 = 3 around the cycle
        const std::vector<int> order{0, 1, 3, 2};
        const auto images = sphere_sequential_sample(c4, 3, order, seed);
        REQUIRE(images.has_value());
        CHECK(std::abs(std::abs(inner((*images)[0], (*images)[2])) - 1.0) <= 1e-9);
        const auto five = sphere_sequential_sample(c4, 5, order, seed);
        REQUIRE(five.has_value());
        for (const auto& x : *five)
            CHECK(std::abs(inner(x, x) - 1.0) <= 1e-9);
    }
    CHECK_FALSE(sphere_sequential_sample(complete_bigraph(3, 1).underlying(), 3, std::vector<int>{0, 1, 2, 3}, 1)
                    .has_value());
}

TEST_CASE("K_{2,2} order experiment") {
    const auto r = k22_order_experiment(3, 10000, 2024);
    CHECK(r.mass_at_one >= 0.999);
    CHECK(r.ks_vs_uniform <= 0.03);
    CHECK(r.hist_a.size() == 40);
    long total = 0;
    for (long c : r.hist_a)
        total += c;
    CHECK(total + r.degenerate == 10000);
    CHECK_THROWS_AS(k22_order_experiment(4, 1000, 1), Error);

    const auto a = k22_csv(k22_order_experiment(3, 1000, 5));
    const auto b = k22_csv(k22_order_experiment(3, 1000, 5));
    CHECK(a == b);
    CHECK(a.rfind("order,sample_index,inner_product\n", 0) == 0);
    CHECK(a.find('\r') == std::string::npos);
}

TEST_CASE("KS statistic") {
    CHECK(ks_uniform({0.5}, 0.0, 1.0) == doctest::Approx(0.5));
    std::vector<double> grid;
    for (int i = 0; i < 1000; ++i)
        grid.push_back(-1.0 + (2.0 * i + 1.0) / 1000.0);
    CHECK(ks_uniform(grid, -1.0, 1.0) <= 1e-3 + 1e-12);
}
