#pragma once

// Combinatorial patterns: simple graphs, bigraphs, trees and their
// sequential tree decompositions. Vertices are dense indices 0..n-1.

#include "xlab/rational.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xlab {

using Edge = std::pair<int, int>;

/// Undirected simple graph. Edges are stored normalized (u < v), sorted and
/// deduplicated; construction rejects loops and out-of-range endpoints.
class Graph {
public:
    Graph() = default;
    explicit Graph(int vertex_count, std::vector<Edge> edges = {});

    int vertex_count() const noexcept { return n_; }
    int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_.at(static_cast<std::size_t>(v)); }
    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
    bool has_edge(int u, int v) const;

    /// Subgraph induced by `vertices`, relabeled in the given order.
    Graph induced(std::span<const int> vertices) const;

    friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
};

/// Bipartite pattern with ordered classes (U, W); left indices and right
/// indices are independent ranges.
class Bigraph {
public:
    Bigraph() = default;
    Bigraph(int left_count, int right_count, std::vector<Edge> edges);

    int left_count() const noexcept { return left_; }
    int right_count() const noexcept { return right_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    /// Right-class vertex w's neighbors (left indices, ascending).
    std::vector<int> right_neighbors(int w) const;

    /// G*: classes swapped.
    Bigraph reversed() const;

    /// Left vertices keep their index, right vertex w becomes left_count + w.
    Graph underlying() const;

    friend bool operator==(const Bigraph& a, const Bigraph& b) {
        return a.left_ == b.left_ && a.right_ == b.right_ && a.edges_ == b.edges_;
    }

private:
    int left_ = 0;
    int right_ = 0;
    std::vector<Edge> edges_;
};

/// Tree with an explicit leaf set L(F); the remaining vertices form M(F).
/// The leaf set distinguishes P_1 (both ends leaves) from S_1 (one leaf).
class Tree {
public:
    /// Validates connectivity and acyclicity. `leaves` defaults to the
    /// degree-1 vertices (empty for a single vertex).
    explicit Tree(Graph g, std::optional<std::vector<int>> leaves = std::nullopt,
                  std::optional<int> root = std::nullopt);

    /// S_k: center 0, leaves 1..k.
    static Tree star(int k);
    /// Path on `vertices` vertices, ends are leaves.
    static Tree path(int vertices);

    const Graph& graph() const noexcept { return g_; }
    int vertex_count() const noexcept { return g_.vertex_count(); }
    const std::vector<int>& leaves() const noexcept { return leaves_; }
    const std::vector<int>& interior() const noexcept { return interior_; }
    std::optional<int> root() const noexcept { return root_; }

private:
    Graph g_;
    std::vector<int> leaves_;
    std::vector<int> interior_;
    std::optional<int> root_;
};

/// One tree F_i of a sequential tree decomposition, in the host graph's labels.
struct DecompositionPiece {
    std::vector<int> vertices; // ascending
    std::vector<Edge> edges;
    std::vector<int> leaves;   // Z_i: attachment set, ascending
    std::vector<int> interior; // M(F_i)
    int center = -1;           // star center (stars only)
};

struct SeqTreeDecomposition {
    std::vector<DecompositionPiece> pieces;

    /// Throws ValidationError unless the pieces are edge-disjoint trees whose
    /// union is `g`, each piece meets the earlier ones exactly in its leaves,
    /// and the first piece is a singleton.
    void validate(const Graph& g) const;
};

/// Integer polynomial, lowest degree first; no trailing zero coefficients.
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<std::int64_t> coefficients);

    const std::vector<std::int64_t>& coefficients() const noexcept { return c_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    std::int64_t coefficient(int power) const;
    BigInt evaluate(long q) const;

    IntPolynomial operator-(const IntPolynomial& other) const;
    IntPolynomial operator*(const IntPolynomial& other) const;
    friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

    std::string to_string() const;

private:
    void trim();
    std::vector<std::int64_t> c_;
};

struct GraphStats {
    int max_degree = 0;
    /// Length of the shortest cycle; nullopt for forests.
    std::optional<int> girth;
    bool triangle_free = true;
    /// Two color classes when the graph is bipartite. The lowest vertex of
    /// every component lies in the first class.
    std::optional<std::pair<std::vector<int>, std::vector<int>>> bipartition;
};

struct EliminationOrder {
    std::vector<int> order;
    int induced_width = 0;
};

// --- I/O --------------------------------------------------------------------

/// Edge-list text: optional `n=<int>` header, one `u v` pair per line,
/// `#` starts a comment.
Graph parse_graph(std::string_view text);
Graph load_graph(const std::string& path);

/// `{"left": k, "right": m, "edges": [[u, w], ...]}`
Bigraph parse_bigraph_json(std::string_view text);
Bigraph load_bigraph(const std::string& path);

std::string to_edge_list(const Graph& g);

// --- Structure ----------------------------------------------------------------

GraphStats graph_stats(const Graph& g);

/// Star F_i centered at order[i] with leaves at its earlier neighbors.
SeqTreeDecomposition star_decomposition(const Graph& g, std::span<const int> order);

/// Breadth-first order from `root`, children in ascending index.
std::vector<int> search_order(const Tree& t, int root);

/// True iff `order` is a permutation in which every vertex after the first
/// has exactly one earlier neighbor.
bool is_search_order(const Tree& t, std::span<const int> order);

/// Every search order of `t` (all roots), in lexicographic order.
std::vector<std::vector<int>> all_search_orders(const Tree& t);

/// Deletion-contraction with memoization. At most `kChromaticEdgeBudget` edges.
inline constexpr int kChromaticEdgeBudget = 16;
IntPolynomial chromatic_polynomial(const Graph& g);

/// Greedy min-fill ordering (ties by lowest index) over all vertices.
EliminationOrder elimination_order(const Graph& g);

/// Min-fill ordering of every vertex not in `keep`; `keep` vertices are never
/// eliminated but still take part in fill-in.
EliminationOrder elimination_order(const Graph& g, std::span<const int> keep);

/// Number of homomorphisms g -> h by exhaustive enumeration, budget
/// |V(h)|^|V(g)| <= max_maps.
BigInt count_homomorphisms_brute_force(const Graph& g, const Graph& h, double max_maps = 1e7);

// --- Constructors -------------------------------------------------------------

Graph complete_graph(int n);
Graph cycle_graph(int n);
/// Path with `vertices` vertices.
Graph path_graph(int vertices);
/// Star with `leaves` leaves, center 0.
Graph star_graph(int leaves);
Graph empty_graph(int n);
Bigraph complete_bigraph(int a, int b);
Graph hypercube_graph(int dim);
Graph disjoint_union(const Graph& a, const Graph& b);
/// Categorical (tensor) product; vertex (x, y) has index x * |V(b)| + y.
Graph categorical_product(const Graph& a, const Graph& b);

/// Resolves names such as "K_3", "C_4", "P_2" (two edges), "S_3" (three
/// leaves), "K_2,3", "Q_3", "E_3" (edgeless).
Graph named_graph(std::string_view name);

/// Simple graphs on `n` vertices, one per isomorphism class (n <= 6).
std::vector<Graph> graphs_up_to_isomorphism(int n);

/// Trees on `n` vertices, one per isomorphism class (n <= 7).
std::vector<Graph> trees_up_to_isomorphism(int n);

} // namespace xlab
