#include "test_support.hpp"
#include "xlab/density.hpp"
#include "xlab/errors.hpp"
#include "xlab/graphon.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace xlab;
using testing::brute_density;
using testing::integer_space;

namespace {

template <class T>
MarkovSpace<T> k_space(int n) {
    const Graph k = complete_graph(n);
    return graph_space<T>(n, k.edges());
}

Rational q(long a, long b) { return ratio<Rational>(a, b); }

std::vector<Graph> weakly_norming() {
    return {cycle_graph(4), cycle_graph(6), complete_bigraph(2, 3).underlying(), complete_bigraph(3, 3).underlying(),
            hypercube_graph(3)};
}

} // namespace

TEST_CASE("density examples") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) {
        CHECK(density(complete_graph(2), random_exact_space(1 + rng() % 6, rng)) == 1);
        CHECK(std::abs(density(complete_graph(2), random_space(1 + rng() % 20, rng, 0.3)) - 1.0) <= 1e-12);
    }
    CHECK(density(cycle_graph(4), k_space<Rational>(2)) == 2);
    CHECK(density(cycle_graph(3), k_space<Rational>(2)) == 0);
    CHECK(density(cycle_graph(3), k_space<Rational>(3)) == q(3, 4));
    for (int n = 1; n <= 7; ++n)
        for (const Graph& tree : trees_up_to_isomorphism(n))
            CHECK(density(tree, random_exact_space(4, rng)) == 1);
}

TEST_CASE("contraction equals brute-force enumeration on all graphs up to 5 vertices") {
    std::mt19937_64 rng(17);
    for (int n = 1; n <= 5; ++n)
        for (const Graph& g : graphs_up_to_isomorphism(n))
            for (int t = 0; t < 2; ++t) {
                const auto exact = random_exact_space(1 + rng() % 4, rng);
                CHECK(density(g, exact) == brute_density(g, exact));
                const auto approx = random_space(1 + rng() % 4, rng, 0.25);
                CHECK(std::abs(density(g, approx) - brute_density(g, approx)) <= 1e-12);
            }
}

TEST_CASE("density is independent of the kernel variant and batch evaluation") {
    std::mt19937_64 rng(23);
    const auto s = random_space(9, rng, 0.5);
    std::vector<Graph> patterns{cycle_graph(5), complete_bigraph(2, 3).underlying(), hypercube_graph(3),
                                complete_graph(4)};
    const auto batch = density_batch(patterns, s);
    for (std::size_t i = 0; i < patterns.size(); ++i)
        CHECK(std::abs(batch[i] - density(patterns[i], s)) <= 1e-12 * std::max(1.0, batch[i]));
}

TEST_CASE("sparse tables give the same densities") {
    const auto s = discretize_graphon<double>({"noncompact-blocks", {{"K", 20}}});
    DensityOptions dense;
    dense.engine.sparse_threshold = 2.0;
    for (const Graph& g : {cycle_graph(4), cycle_graph(5), path_graph(4), complete_graph(3)})
        CHECK(density(g, s) == doctest::Approx(density(g, s, dense)).epsilon(1e-13));
    CHECK(density(cycle_graph(4), s) == doctest::Approx(21.0).epsilon(1e-13));
}

TEST_CASE("budget is enforced") {
    std::mt19937_64 rng(2);
    const auto s = random_space(40, rng);
    DensityOptions tight;
    tight.engine.budget = 1e5;
    CHECK_THROWS_AS(density(complete_graph(4), s, tight), BudgetError);
    CHECK_NOTHROW(density(cycle_graph(4), s, tight));
}

TEST_CASE("detailed density reports the width") {
    std::mt19937_64 rng(3);
    const auto s = random_space(3, rng);
    CHECK(density_detailed(path_graph(5), s).width == 1);
    CHECK(density_detailed(cycle_graph(6), s).width == 2);
    CHECK(density_detailed(complete_graph(4), s).width == 3);
}

TEST_CASE("normalized density is invariant under input scaling") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    SquareMatrix<double> m(5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i; j < 5; ++j)
            m(i, j) = m(j, i) = u(rng);
    SquareMatrix<double> scaled = m;
    for (auto& v : scaled.data())
        v *= 37.5;
    const auto a = FloatSpace::from_matrix(m, true);
    const auto b = FloatSpace::from_matrix(scaled, true);
    DensityOptions norm;
    norm.normalized = true;
    for (const Graph& g : {cycle_graph(4), complete_graph(3), path_graph(3)}) {
        CHECK(density(g, a, norm) == doctest::Approx(density(g, b, norm)).epsilon(1e-13));
        CHECK(density(g, a, norm) == doctest::Approx(density(g, a)).epsilon(1e-13));
    }
}

TEST_CASE("bigraph densities") {
    CHECK(density(complete_bigraph(2, 2), k_space<Rational>(2)) == 2);
    std::mt19937_64 rng(8);
    const auto s = random_exact_space(4, rng);
    CHECK(bigraph_density_via_s(complete_bigraph(2, 2), k_space<Rational>(2)) == 2);
    CHECK(bigraph_density_via_s(complete_bigraph(1, 3), s) == 1);
    CHECK(bigraph_density_via_s(complete_bigraph(1, 1), s) == 1);
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) {
            const auto k = complete_bigraph(a, b);
            CHECK(bigraph_density_via_s(k, s) == brute_density(k.underlying(), s));
            CHECK(density(k, s) == density(k.reversed(), s));
        }
    const Bigraph odd(2, 3, {{0, 0}, {0, 1}, {1, 1}, {1, 2}});
    CHECK(bigraph_density_via_s(odd, s) == brute_density(odd.underlying(), s));
}

TEST_CASE("normalized densities in finite graphs") {
    CHECK(normalized_density_finite_graph(cycle_graph(4), complete_graph(2)) == 2);
    CHECK(normalized_density_finite_graph(cycle_graph(4), complete_graph(3)) == q(9, 8));
    CHECK(normalized_density_finite_graph(complete_graph(2), cycle_graph(5)) == 1);
    CHECK(normalized_density_finite_graph(complete_graph(2), hypercube_graph(3)) == 1);
    CHECK(hom_count(cycle_graph(4), complete_graph(3)) == 18);
    CHECK(hom_count(cycle_graph(5), cycle_graph(4)) ==
          count_homomorphisms_brute_force(cycle_graph(5), cycle_graph(4)));
    CHECK_THROWS_AS(normalized_density_finite_graph(cycle_graph(4), empty_graph(3)), Error);
}

TEST_CASE("normalized density via graph spaces matches finite-graph formula") {
    for (int n = 2; n <= 5; ++n) {
        const auto s = k_space<Rational>(n);
        for (const Graph& g : {cycle_graph(4), cycle_graph(5), complete_graph(3)})
            CHECK(density(g, s) == normalized_density_finite_graph(g, complete_graph(n)));
    }
}

TEST_CASE("hom measure") {
    const HomMeasure<Rational> edge(complete_graph(2), k_space<Rational>(2));
    CHECK(edge.materialize() == std::vector<Rational>{0, q(1, 2), q(1, 2), 0});

    std::mt19937_64 rng(4);
    const auto s = random_exact_space(3, rng);
    CHECK(HomMeasure<Rational>(Graph(1), s).materialize() == s.pi());
    const std::vector<int> first{0};
    CHECK(HomMeasure<Rational>(complete_graph(2), s).marginal(first) == s.pi());

    const HomMeasure<Rational> c4(cycle_graph(4), k_space<Rational>(2));
    CHECK(c4.total_mass() == 2);
    CHECK(c4.marginal(first) == std::vector<Rational>{1, 1});
    const std::vector<int> all{0, 1, 2, 3};
    CHECK(c4.marginal(all) == c4.materialize());
    CHECK(c4.materialize() == testing::brute_hom_table(cycle_graph(4), k_space<Rational>(2)));

    const Graph g = complete_bigraph(2, 3).underlying();
    const HomMeasure<Rational> m(g, s);
    CHECK(m.materialize() == testing::brute_hom_table(g, s));
    const std::vector<int> map{0, 2, 1, 1, 0};
    CHECK(m.weight(map) == testing::map_weight(g, s, {0, 2, 1, 1, 0}));
    const std::vector<int> pair{3, 0};
    const auto marg = m.marginal(pair);
    const auto full = m.materialize();
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            Rational sum = 0;
            testing::for_each_map(5, 3, [&](const std::vector<int>& x) {
                if (x[3] == a && x[0] == b)
                    sum += testing::map_weight(g, s, x);
            });
            CHECK(marg[static_cast<std::size_t>(a * 3 + b)] == sum);
        }
}

TEST_CASE("s_k tables") {
    std::mt19937_64 rng(10);
    const auto s = random_exact_space(3, rng);
    for (const auto& v : s_table(s, 1).values)
        CHECK(v == 1);
    CHECK(s_table(k_space<Rational>(2), 2).values == std::vector<Rational>{2, 0, 0, 2});
    for (const auto& v : s_table(integer_space({{1}}), 3).values)
        CHECK(v == 1);

    for (int k = 1; k <= 3; ++k) {
        const auto table = s_table(s, k);
        Rational total = 0;
        testing::for_each_map(k, 3, [&](const std::vector<int>& y) {
            Rational weight = 1;
            Rational brute = 0;
            for (int yj : y)
                weight *= s.pi()[static_cast<std::size_t>(yj)];
            for (int x = 0; x < 3; ++x) {
                Rational term = s.pi()[static_cast<std::size_t>(x)];
                for (int yj : y)
                    term *= testing::graphon_value(s, x, yj);
                brute += term;
            }
            CHECK(table.at(y) == brute);
            total += weight * table.at(y);
            auto swapped = y;
            std::reverse(swapped.begin(), swapped.end());
            CHECK(table.at(swapped) == table.at(y));
        });
        CHECK(total == 1);
    }
}

TEST_CASE("kp norms") {
    std::mt19937_64 rng(14);
    const auto s = random_space(5, rng);
    for (int p = 1; p <= 4; ++p)
        CHECK(kp_norm(s, 1, p) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(kp_norm(k_space<double>(2), 2, 2) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-14));
    const auto one = integer_space({{1}});
    for (int k = 1; k <= 4; ++k)
        for (int p = 1; p <= 4; ++p)
            CHECK(kp_norm(one, k, p) == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 1; k <= 4; ++k)
        for (int p = 1; p <= 4; ++p) {
            CHECK(std::abs(kp_norm(s, k, p) - kp_norm(s, p, k)) <= 1e-10);
            const double t = density(complete_bigraph(k, p), s);
            CHECK(std::abs(std::pow(kp_norm(s, k, p), k * p) - t) <= 1e-10);
        }
}

TEST_CASE("weak step Sidorenko and refinement monotonicity") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 15; ++t) {
        const std::size_t n = 2 + rng() % 6;
        const auto s = random_space(n, rng, 0.3);
        const auto fine = random_partition(n, n, rng);
        const auto coarse = random_coarsening(fine, rng);
        for (const Graph& g : weakly_norming()) {
            const double full = density(g, s);
            const double mid = density(g, project(s, fine));
            const double low = density(g, project(s, coarse));
            CHECK(mid <= full + 1e-12);
            CHECK(low <= mid + 1e-12);
        }
    }
}

TEST_CASE("projection can raise the density of a non-norming pattern") {
    // K_3 fails weak step Sidorenko; a bipartite space has t(K_3) = 0 but its flattening does not.
    const auto s = k_space<Rational>(2);
    CHECK(density(complete_graph(3), s) == 0);
    CHECK(density(complete_graph(3), project(s, Partition::trivial(2))) == 1);
}

TEST_CASE("quotient and project give the same densities") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 10; ++t) {
        const auto s = random_exact_space(6, rng);
        const auto p = random_partition(6, 3, rng);
        for (const Graph& g : {cycle_graph(4), complete_graph(3), path_graph(4)})
            CHECK(density(g, quotient(s, p)) == density(g, project(s, p)));
    }
}

TEST_CASE("Finner inequality") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    FinnerSystem single{3, {0.2, 0.3, 0.5}, 2, {}};
    single.factors.push_back({{0, 1}, {}});
    for (int i = 0; i < 9; ++i)
        single.factors[0].table.push_back(u(rng));
    const auto eq = finner_check(single, 1);
    CHECK(eq.lhs == doctest::Approx(eq.rhs).epsilon(1e-15));
    CHECK(eq.holds);

    FinnerSystem cs{2, {0.5, 0.5}, 2, {}};
    cs.factors.push_back({{0, 1}, {1.0, 2.0, 3.0, 4.0}});
    cs.factors.push_back({{0, 1}, {4.0, 1.0, 0.5, 2.0}});
    const auto r = finner_check(cs, 2);
    CHECK(r.holds);
    CHECK(r.lhs <= r.rhs);

    for (int t = 0; t < 100; ++t) {
        FinnerSystem sys;
        sys.n = 2 + rng() % 3;
        sys.var_count = 2 + static_cast<int>(rng() % 4);
        for (std::size_t i = 0; i < sys.n; ++i)
            sys.pi.push_back(u(rng) + 0.1);
        double total = 0.0;
        for (double p : sys.pi)
            total += p;
        for (double& p : sys.pi)
            p /= total;
        std::vector<int> used(static_cast<std::size_t>(sys.var_count), 0);
        const int factors = 1 + static_cast<int>(rng() % 5);
        for (int f = 0; f < factors; ++f) {
            Factor<double> fac;
            for (int v = 0; v < sys.var_count; ++v)
                if (used[static_cast<std::size_t>(v)] < 3 && u(rng) < 0.5) {
                    fac.scope.push_back(v);
                    ++used[static_cast<std::size_t>(v)];
                }
            if (fac.scope.empty())
                continue;
            fac.table.resize(table_volume(sys.n, fac.scope.size()));
            for (double& v : fac.table)
                v = u(rng);
            sys.factors.push_back(std::move(fac));
        }
        CHECK(finner_check(sys, 3).holds);
    }

    CHECK_THROWS_AS(finner_check(cs, 1), ValidationError);
}

TEST_CASE("family checks") {
    std::mt19937_64 rng(61);
    const auto s = random_exact_space(3, rng);
    const Graph two_edges = disjoint_union(complete_graph(2), complete_graph(2));
    const auto table = HomMeasure<Rational>(two_edges, s).materialize();
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t c = 0; c < 3; ++c)
                for (std::size_t d = 0; d < 3; ++d)
                    CHECK(table[((a * 3 + b) * 3 + c) * 3 + d] == s.eta()(a, b) * s.eta()(c, d));

    const auto p3 = check_family(path_graph(3), random_space(3, rng));
    CHECK(p3.markov_ok);
    CHECK(p3.decreasing_ok);
    CHECK(p3.max_residual <= 1e-12);
    CHECK(p3.separations_checked > 0);

    const auto single = check_family(cycle_graph(5), integer_space({{1}}));
    CHECK(single.markov_ok);
    CHECK(single.decreasing_ok);

    const auto exact = check_family(cycle_graph(4), s);
    CHECK(exact.markov_ok);
    CHECK(exact.max_residual == 0.0);
}
