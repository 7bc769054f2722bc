#include "test_support.hpp"
#include "xlab/errors.hpp"
#include "xlab/graph.hpp"

#include <doctest.h>

#include <random>
#include <set>
#include <numeric>
#include <algorithm>

using namespace xlab;

namespace {

long brute_colorings(const Graph& g, int q) {
    long count = 0;
    if (g.vertex_count() == 0)
        return 1;
    testing::for_each_map(g.vertex_count(), static_cast<std::size_t>(q), [&](const std::vector<int>& c) {
        for (const auto& [u, v] : g.edges())
            if (c[static_cast<std::size_t>(u)] == c[static_cast<std::size_t>(v)])
                return;
        ++count;
    });
    return count;
}

Graph random_graph(int n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng))
                edges.emplace_back(u, v);
    return Graph(n, edges);
}

} // namespace

TEST_CASE("parse_graph reads edge lists") {
    const Graph c4 = parse_graph("0 1\n1 2\n2 3\n3 0");
    CHECK(c4.vertex_count() == 4);
    CHECK(c4.edge_count() == 4);
    CHECK(c4 == cycle_graph(4));

    const Graph single = parse_graph("n=1\n");
    CHECK(single.vertex_count() == 1);
    CHECK(single.edge_count() == 0);

    const Graph k2 = parse_graph("0 1\n0 1");
    CHECK(k2.edge_count() == 1);

    const Graph commented = parse_graph("# a path\nn=4\n0 1 # first\n\n1 2\n");
    CHECK(commented.vertex_count() == 4);
    CHECK(commented.edge_count() == 2);
}

TEST_CASE("parse_graph rejects malformed input") {
    CHECK_THROWS_AS(parse_graph("0 0"), Error);
    CHECK_THROWS_AS(parse_graph("0 x"), ParseError);
    CHECK_THROWS_AS(parse_graph("n=2\n0 5"), Error);
    CHECK_THROWS_AS(parse_graph("0 1 2"), ParseError);
}

TEST_CASE("edge list round trip") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const Graph g = random_graph(6, 0.5, rng);
        CHECK(parse_graph(to_edge_list(g)) == g);
    }
}

TEST_CASE("bigraph JSON") {
    const Bigraph b = parse_bigraph_json(R"({"left": 2, "right": 3, "edges": [[0,0],[0,1],[1,2]]})");
    CHECK(b.left_count() == 2);
    CHECK(b.right_count() == 3);
    CHECK(b.edges().size() == 3);
    CHECK(b.reversed().reversed() == b);
    CHECK(b.underlying().has_edge(1, 4));
    CHECK_THROWS_AS(parse_bigraph_json(R"({"left": 1, "right": 1, "edges": [[0,3]]})"), Error);
    CHECK_THROWS_AS(parse_bigraph_json("{"), ParseError);
}

TEST_CASE("bigraph reversal is an involution") {
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) {
            const Bigraph k = complete_bigraph(a, b);
            CHECK(k.reversed().reversed() == k);
            CHECK(k.reversed().left_count() == b);
        }
}

TEST_CASE("graph_stats") {
    const auto c4 = graph_stats(cycle_graph(4));
    CHECK(c4.max_degree == 2);
    REQUIRE(c4.girth.has_value());
    CHECK(*c4.girth == 4);
    CHECK(c4.triangle_free);
    REQUIRE(c4.bipartition.has_value());
    CHECK(c4.bipartition->first == std::vector<int>{0, 2});
    CHECK(c4.bipartition->second == std::vector<int>{1, 3});

    const auto c3 = graph_stats(cycle_graph(3));
    CHECK(*c3.girth == 3);
    CHECK_FALSE(c3.triangle_free);
    CHECK_FALSE(c3.bipartition.has_value());

    const auto p4 = graph_stats(path_graph(4));
    CHECK_FALSE(p4.girth.has_value());
    CHECK(p4.triangle_free);
    CHECK(p4.bipartition.has_value());
}

TEST_CASE("named graphs") {
    CHECK(named_graph("K_3") == complete_graph(3));
    CHECK(named_graph("C_5") == cycle_graph(5));
    CHECK(named_graph("P_2").vertex_count() == 3);
    CHECK(named_graph("P_2").edge_count() == 2);
    CHECK(named_graph("S_3").edge_count() == 3);
    CHECK(named_graph("K_2,3").edge_count() == 6);
    CHECK(named_graph("Q_3").edge_count() == 12);
    CHECK(named_graph("E_3").edge_count() == 0);
    CHECK_THROWS_AS(named_graph("X_1"), Error);
}

TEST_CASE("star_decomposition of C_4") {
    const std::vector<int> order{0, 1, 2, 3};
    const auto d = star_decomposition(cycle_graph(4), order);
    REQUIRE(d.pieces.size() == 4);
    CHECK(d.pieces[0].vertices == std::vector<int>{0});
    CHECK(d.pieces[0].edges.empty());
    CHECK(d.pieces[1].center == 1);
    CHECK(d.pieces[1].leaves == std::vector<int>{0});
    CHECK(d.pieces[2].center == 2);
    CHECK(d.pieces[2].leaves == std::vector<int>{1});
    CHECK(d.pieces[3].center == 3);
    CHECK(d.pieces[3].leaves == std::vector<int>{0, 2});
    d.validate(cycle_graph(4));
}

TEST_CASE("star_decomposition of K_{2,2} with U first") {
    const Graph k22 = complete_bigraph(2, 2).underlying();
    const std::vector<int> order{0, 1, 2, 3};
    const auto d = star_decomposition(k22, order);
    REQUIRE(d.pieces.size() == 4);
    CHECK(d.pieces[0].edges.empty());
    CHECK(d.pieces[1].edges.empty());
    CHECK(d.pieces[2].leaves == std::vector<int>{0, 1});
    CHECK(d.pieces[3].leaves == std::vector<int>{0, 1});
}

TEST_CASE("star_decomposition of a single vertex") {
    const std::vector<int> order{0};
    const auto d = star_decomposition(Graph(1), order);
    REQUIRE(d.pieces.size() == 1);
    CHECK(d.pieces[0].vertices == std::vector<int>{0});
}

TEST_CASE("star_decomposition is structurally valid on random graphs and orders") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + static_cast<int>(rng() % 7);
        const Graph g = random_graph(n, 0.45, rng);
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        const auto d = star_decomposition(g, order);
        CHECK_NOTHROW(d.validate(g));
        std::size_t edges = 0;
        for (const auto& piece : d.pieces)
            edges += piece.edges.size();
        CHECK(edges == g.edges().size());
    }
}

TEST_CASE("star_decomposition rejects bad orders") {
    const std::vector<int> short_order{0, 1};
    CHECK_THROWS_AS(star_decomposition(cycle_graph(4), short_order), Error);
    const std::vector<int> repeated{0, 1, 1, 2};
    CHECK_THROWS_AS(star_decomposition(cycle_graph(4), repeated), Error);
}

TEST_CASE("search orders") {
    const Tree p3 = Tree::path(3);
    CHECK(search_order(p3, 1) == std::vector<int>{1, 0, 2});
    CHECK(search_order(Tree::star(2), 0) == std::vector<int>{0, 1, 2});
    CHECK(search_order(Tree(Graph(1)), 0) == std::vector<int>{0});

    for (int n = 1; n <= 6; ++n)
        for (const Graph& g : trees_up_to_isomorphism(n)) {
            const Tree t(g);
            for (const auto& order : all_search_orders(t)) {
                CHECK(is_search_order(t, order));
                for (std::size_t i = 1; i < order.size(); ++i) {
                    int earlier = 0;
                    for (std::size_t j = 0; j < i; ++j)
                        earlier += g.has_edge(order[i], order[j]) ? 1 : 0;
                    CHECK(earlier == 1);
                }
            }
        }
    const std::vector<int> bad{0, 2, 1};
    CHECK_FALSE(is_search_order(p3, bad));
}

TEST_CASE("trees validate their shape") {
    CHECK_THROWS_AS(Tree(cycle_graph(3)), Error);
    CHECK_THROWS_AS(Tree(empty_graph(2)), Error);
    CHECK(Tree::path(2).leaves() == std::vector<int>{0, 1});
    CHECK(Tree::star(3).interior() == std::vector<int>{0});
}

TEST_CASE("chromatic polynomial examples") {
    CHECK(chromatic_polynomial(complete_graph(2)) == IntPolynomial({0, -1, 1}));
    const auto c4 = chromatic_polynomial(cycle_graph(4));
    CHECK(c4.evaluate(3) == 18);
    // (q-1)^4 + (q-1) = q^4 - 4q^3 + 6q^2 - 3q
    CHECK(c4 == IntPolynomial({0, -3, 6, -4, 1}));
    CHECK(chromatic_polynomial(empty_graph(3)) == IntPolynomial({0, 0, 0, 1}));
    CHECK_THROWS_AS(chromatic_polynomial(complete_graph(7)), BudgetError);
}

TEST_CASE("chromatic polynomial matches brute-force colorings on all graphs up to 6 vertices") {
    for (int n = 1; n <= 6; ++n)
        for (const Graph& g : graphs_up_to_isomorphism(n)) {
            const auto chi = chromatic_polynomial(g);
            for (int q = 1; q <= 3; ++q)
                CHECK(chi.evaluate(q) == brute_colorings(g, q));
        }
}

TEST_CASE("isomorphism class counts") {
    const std::vector<std::size_t> graphs{1, 2, 4, 11, 34, 156};
    const std::vector<std::size_t> trees{1, 1, 1, 2, 3, 6, 11};
    for (int n = 1; n <= 6; ++n)
        CHECK(graphs_up_to_isomorphism(n).size() == graphs[static_cast<std::size_t>(n - 1)]);
    for (int n = 1; n <= 7; ++n)
        CHECK(trees_up_to_isomorphism(n).size() == trees[static_cast<std::size_t>(n - 1)]);
}

TEST_CASE("elimination order widths") {
    for (int n = 2; n <= 7; ++n)
        for (const Graph& g : trees_up_to_isomorphism(n))
            CHECK(elimination_order(g).induced_width == 1);
    for (int k = 3; k <= 9; ++k)
        CHECK(elimination_order(cycle_graph(k)).induced_width == 2);
    CHECK(elimination_order(complete_graph(4)).induced_width == 3);
    const auto order = elimination_order(cycle_graph(6)).order;
    CHECK(std::set<int>(order.begin(), order.end()).size() == 6);
}

TEST_CASE("categorical product of complete graphs") {
    const Graph p = categorical_product(complete_graph(2), complete_graph(3));
    CHECK(p.vertex_count() == 6);
    // (x, y) ~ (x', y') iff x != x' and y != y'
    CHECK(p.edge_count() == 6 * 1 * 2 / 2);
    CHECK(p.has_edge(0 * 3 + 0, 1 * 3 + 1));
    CHECK_FALSE(p.has_edge(0 * 3 + 0, 1 * 3 + 0));
}

TEST_CASE("brute-force hom count") {
    CHECK(count_homomorphisms_brute_force(cycle_graph(4), complete_graph(3)) == 18);
    CHECK(count_homomorphisms_brute_force(cycle_graph(3), complete_graph(2)) == 0);
    CHECK_THROWS_AS(count_homomorphisms_brute_force(cycle_graph(8), complete_graph(20), 1e6), BudgetError);
}
