#include "xlab/graph.hpp"

#include "xlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

namespace xlab {

Graph::Graph(int vertex_count, std::vector<Edge> edges) : n_(vertex_count) {
    if (vertex_count < 0)
        throw ValidationError("negative vertex count");
    for (auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n_ || v >= n_)
            throw ValidationError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range");
        if (u == v)
            throw ValidationError("self-loop at vertex " + std::to_string(u));
        if (u > v)
            std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
    adj_.assign(static_cast<std::size_t>(n_), {});
    for (const auto& [u, v] : edges_) {
        adj_[static_cast<std::size_t>(u)].push_back(v);
        adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& list : adj_)
        std::sort(list.begin(), list.end());
}

bool Graph::has_edge(int u, int v) const {
    const auto& list = neighbors(u);
    return std::binary_search(list.begin(), list.end(), v);
}

Graph Graph::induced(std::span<const int> vertices) const {
    std::vector<int> pos(static_cast<std::size_t>(n_), -1);
    for (std::size_t i = 0; i < vertices.size(); ++i)
        pos.at(static_cast<std::size_t>(vertices[i])) = static_cast<int>(i);
    std::vector<Edge> sub;
    for (const auto& [u, v] : edges_) {
        const int a = pos[static_cast<std::size_t>(u)];
        const int b = pos[static_cast<std::size_t>(v)];
        if (a >= 0 && b >= 0)
            sub.emplace_back(a, b);
    }
    return Graph(static_cast<int>(vertices.size()), std::move(sub));
}

// --- Bigraph -------------------------------------------------------------------

Bigraph::Bigraph(int left_count, int right_count, std::vector<Edge> edges)
    : left_(left_count), right_(right_count) {
    if (left_count < 0 || right_count < 0)
        throw ValidationError("negative class size");
    for (const auto& [u, w] : edges) {
        if (u < 0 || u >= left_ || w < 0 || w >= right_)
            throw ValidationError("bigraph edge (" + std::to_string(u) + ", " + std::to_string(w) + ") out of range");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
}

std::vector<int> Bigraph::right_neighbors(int w) const {
    std::vector<int> out;
    for (const auto& [u, x] : edges_)
        if (x == w)
            out.push_back(u);
    return out;
}

Bigraph Bigraph::reversed() const {
    std::vector<Edge> flipped;
    flipped.reserve(edges_.size());
    for (const auto& [u, w] : edges_)
        flipped.emplace_back(w, u);
    return Bigraph(right_, left_, std::move(flipped));
}

Graph Bigraph::underlying() const {
    std::vector<Edge> out;
    out.reserve(edges_.size());
    for (const auto& [u, w] : edges_)
        out.emplace_back(u, left_ + w);
    return Graph(left_ + right_, std::move(out));
}

// --- Tree ----------------------------------------------------------------------

Tree::Tree(Graph g, std::optional<std::vector<int>> leaves, std::optional<int> root)
    : g_(std::move(g)), root_(root) {
    const int n = g_.vertex_count();
    if (n == 0)
        throw ValidationError("a tree needs at least one vertex");
    if (g_.edge_count() != n - 1)
        throw ValidationError("not a tree: |E| != |V| - 1");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : g_.neighbors(v)) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    if (reached != n)
        throw ValidationError("not a tree: disconnected");
    if (root_ && (*root_ < 0 || *root_ >= n))
        throw ValidationError("tree root out of range");

    if (leaves) {
        leaves_ = *leaves;
        std::sort(leaves_.begin(), leaves_.end());
        leaves_.erase(std::unique(leaves_.begin(), leaves_.end()), leaves_.end());
        for (int v : leaves_) {
            if (v < 0 || v >= n)
                throw ValidationError("leaf out of range");
            if (n > 1 && g_.degree(v) != 1)
                throw ValidationError("declared leaf " + std::to_string(v) + " has degree != 1");
        }
        if (n == 1 && !leaves_.empty())
            throw ValidationError("the one-vertex tree has no leaves");
    } else if (n > 1) {
        for (int v = 0; v < n; ++v)
            if (g_.degree(v) == 1)
                leaves_.push_back(v);
    }
    for (int v = 0; v < n; ++v)
        if (!std::binary_search(leaves_.begin(), leaves_.end(), v))
            interior_.push_back(v);
}

Tree Tree::star(int k) {
    std::vector<int> leaves(static_cast<std::size_t>(k));
    std::iota(leaves.begin(), leaves.end(), 1);
    return Tree(star_graph(k), leaves, 0);
}

Tree Tree::path(int vertices) { return Tree(path_graph(vertices)); }

// --- Decomposition ---------------------------------------------------------------

void SeqTreeDecomposition::validate(const Graph& g) const {
    if (pieces.empty()) {
        if (g.vertex_count() == 0)
            return;
        throw ValidationError("empty decomposition of a nonempty graph");
    }
    if (pieces.front().vertices.size() != 1 || !pieces.front().edges.empty())
        throw ValidationError("first piece is not a singleton");

    std::set<Edge> used;
    std::vector<char> covered(static_cast<std::size_t>(g.vertex_count()), 0);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& piece = pieces[i];
        // Each piece must itself be a tree on its vertex set.
        std::vector<int> local(static_cast<std::size_t>(g.vertex_count()), -1);
        for (std::size_t j = 0; j < piece.vertices.size(); ++j)
            local.at(static_cast<std::size_t>(piece.vertices[j])) = static_cast<int>(j);
        std::vector<Edge> local_edges;
        for (auto e : piece.edges) {
            if (e.first > e.second)
                std::swap(e.first, e.second);
            if (!g.has_edge(e.first, e.second))
                throw ValidationError("piece edge not in graph");
            if (!used.insert(e).second)
                throw ValidationError("pieces are not edge-disjoint");
            local_edges.emplace_back(local.at(static_cast<std::size_t>(e.first)),
                                     local.at(static_cast<std::size_t>(e.second)));
        }
        const Tree t(Graph(static_cast<int>(piece.vertices.size()), local_edges));
        (void)t;

        std::vector<int> meet;
        for (int v : piece.vertices)
            if (covered[static_cast<std::size_t>(v)])
                meet.push_back(v);
        if (meet != piece.leaves)
            throw ValidationError("piece " + std::to_string(i) + " meets earlier pieces outside its leaf set");
        for (int v : piece.vertices)
            covered[static_cast<std::size_t>(v)] = 1;
    }
    if (static_cast<int>(used.size()) != g.edge_count())
        throw ValidationError("pieces do not cover every edge");
    if (std::count(covered.begin(), covered.end(), 1) != g.vertex_count())
        throw ValidationError("pieces do not cover every vertex");
}

// --- Polynomials -------------------------------------------------------------------

IntPolynomial::IntPolynomial(std::vector<std::int64_t> coefficients) : c_(std::move(coefficients)) { trim(); }

void IntPolynomial::trim() {
    while (!c_.empty() && c_.back() == 0)
        c_.pop_back();
}

std::int64_t IntPolynomial::coefficient(int power) const {
    if (power < 0 || power >= static_cast<int>(c_.size()))
        return 0;
    return c_[static_cast<std::size_t>(power)];
}

BigInt IntPolynomial::evaluate(long q) const {
    BigInt acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc *= q;
        acc += BigInt(static_cast<long>(*it));
    }
    return acc;
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& other) const {
    std::vector<std::int64_t> out(std::max(c_.size(), other.c_.size()), 0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        out[i] += c_[i];
    for (std::size_t i = 0; i < other.c_.size(); ++i)
        out[i] -= other.c_[i];
    return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& other) const {
    if (c_.empty() || other.c_.empty())
        return {};
    std::vector<std::int64_t> out(c_.size() + other.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < other.c_.size(); ++j)
            out[i + j] += c_[i] * other.c_[j];
    return IntPolynomial(std::move(out));
}

std::string IntPolynomial::to_string() const {
    if (c_.empty())
        return "0";
    std::string out;
    for (int p = degree(); p >= 0; --p) {
        const auto c = c_[static_cast<std::size_t>(p)];
        if (c == 0)
            continue;
        const auto mag = c < 0 ? -c : c;
        if (out.empty())
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        if (mag != 1 || p == 0)
            out += std::to_string(mag);
        if (p >= 1)
            out += "q";
        if (p >= 2)
            out += "^" + std::to_string(p);
    }
    return out;
}

// --- Structural queries ---------------------------------------------------------------

GraphStats graph_stats(const Graph& g) {
    GraphStats stats;
    const int n = g.vertex_count();
    for (int v = 0; v < n; ++v)
        stats.max_degree = std::max(stats.max_degree, g.degree(v));

    int best = std::numeric_limits<int>::max();
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<int> parent(static_cast<std::size_t>(n));
    for (int root = 0; root < n; ++root) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(parent.begin(), parent.end(), -1);
        std::queue<int> queue;
        dist[static_cast<std::size_t>(root)] = 0;
        queue.push(root);
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop();
            for (int w : g.neighbors(u)) {
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
                    parent[static_cast<std::size_t>(w)] = u;
                    queue.push(w);
                } else if (parent[static_cast<std::size_t>(u)] != w) {
                    best = std::min(best, dist[static_cast<std::size_t>(u)] + dist[static_cast<std::size_t>(w)] + 1);
                }
            }
        }
    }
    if (best != std::numeric_limits<int>::max())
        stats.girth = best;
    stats.triangle_free = !stats.girth || *stats.girth > 3;

    std::vector<int> color(static_cast<std::size_t>(n), -1);
    bool bipartite = true;
    for (int start = 0; start < n && bipartite; ++start) {
        if (color[static_cast<std::size_t>(start)] >= 0)
            continue;
        color[static_cast<std::size_t>(start)] = 0;
        std::queue<int> queue;
        queue.push(start);
        while (!queue.empty() && bipartite) {
            const int u = queue.front();
            queue.pop();
            for (int w : g.neighbors(u)) {
                auto& cw = color[static_cast<std::size_t>(w)];
                if (cw < 0) {
                    cw = 1 - color[static_cast<std::size_t>(u)];
                    queue.push(w);
                } else if (cw == color[static_cast<std::size_t>(u)]) {
                    bipartite = false;
                    break;
                }
            }
        }
    }
    if (bipartite) {
        std::pair<std::vector<int>, std::vector<int>> classes;
        for (int v = 0; v < n; ++v)
            (color[static_cast<std::size_t>(v)] == 0 ? classes.first : classes.second).push_back(v);
        stats.bipartition = std::move(classes);
    }
    return stats;
}

namespace {

void require_permutation(std::span<const int> order, int n) {
    if (static_cast<int>(order.size()) != n)
        throw ValidationError("order is not a permutation: wrong length");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : order) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
            throw ValidationError("order is not a permutation");
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

} // namespace

SeqTreeDecomposition star_decomposition(const Graph& g, std::span<const int> order) {
    const int n = g.vertex_count();
    require_permutation(order, n);
    std::vector<int> position(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        position[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;

    SeqTreeDecomposition dec;
    for (int i = 0; i < n; ++i) {
        const int c = order[static_cast<std::size_t>(i)];
        DecompositionPiece piece;
        piece.center = c;
        for (int w : g.neighbors(c))
            if (position[static_cast<std::size_t>(w)] < i)
                piece.leaves.push_back(w);
        piece.vertices = piece.leaves;
        piece.vertices.push_back(c);
        std::sort(piece.vertices.begin(), piece.vertices.end());
        for (int z : piece.leaves)
            piece.edges.emplace_back(std::min(c, z), std::max(c, z));
        piece.interior = {c};
        dec.pieces.push_back(std::move(piece));
    }
    return dec;
}

std::vector<int> search_order(const Tree& t, int root) {
    const Graph& g = t.graph();
    if (root < 0 || root >= g.vertex_count())
        throw ValidationError("search root out of range");
    std::vector<int> order{root};
    std::vector<char> seen(static_cast<std::size_t>(g.vertex_count()), 0);
    seen[static_cast<std::size_t>(root)] = 1;
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (int w : g.neighbors(order[head])) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                order.push_back(w);
            }
        }
    }
    return order;
}

bool is_search_order(const Tree& t, std::span<const int> order) {
    const Graph& g = t.graph();
    const int n = g.vertex_count();
    if (static_cast<int>(order.size()) != n)
        return false;
    std::vector<char> placed(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const int v = order[i];
        if (v < 0 || v >= n || placed[static_cast<std::size_t>(v)])
            return false;
        if (i > 0) {
            int earlier = 0;
            for (int w : g.neighbors(v))
                earlier += placed[static_cast<std::size_t>(w)];
            if (earlier != 1)
                return false;
        }
        placed[static_cast<std::size_t>(v)] = 1;
    }
    return true;
}

std::vector<std::vector<int>> all_search_orders(const Tree& t) {
    std::vector<std::vector<int>> out;
    std::vector<int> perm(static_cast<std::size_t>(t.vertex_count()));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (is_search_order(t, perm))
            out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

// --- Homomorphism counting ---------------------------------------------------------------

BigInt count_homomorphisms_brute_force(const Graph& g, const Graph& h, double max_maps) {
    const int a = g.vertex_count();
    const int p = h.vertex_count();
    if (std::pow(static_cast<double>(p), a) > max_maps)
        throw BudgetError("brute-force homomorphism count exceeds budget");
    if (a == 0)
        return 1;
    if (p == 0)
        return 0;
    // Depth-first extension in vertex order, checking edges to earlier vertices.
    std::vector<std::vector<int>> back(static_cast<std::size_t>(a));
    for (const auto& [u, v] : g.edges())
        back[static_cast<std::size_t>(v)].push_back(u);
    std::vector<int> image(static_cast<std::size_t>(a), -1);
    std::uint64_t count = 0;
    int depth = 0;
    while (depth >= 0) {
        auto& x = image[static_cast<std::size_t>(depth)];
        ++x;
        if (x >= p) {
            x = -1;
            --depth;
            continue;
        }
        bool ok = true;
        for (int u : back[static_cast<std::size_t>(depth)]) {
            if (!h.has_edge(image[static_cast<std::size_t>(u)], x)) {
                ok = false;
                break;
            }
        }
        if (!ok)
            continue;
        if (depth == a - 1)
            ++count;
        else
            ++depth;
    }
    return BigInt(std::to_string(count));
}

// --- Constructors --------------------------------------------------------------------------

Graph complete_graph(int n) {
    std::vector<Edge> e;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            e.emplace_back(u, v);
    return Graph(n, std::move(e));
}

Graph cycle_graph(int n) {
    if (n < 3)
        throw ValidationError("cycles need at least 3 vertices");
    std::vector<Edge> e;
    for (int v = 0; v < n; ++v)
        e.emplace_back(v, (v + 1) % n);
    return Graph(n, std::move(e));
}

Graph path_graph(int vertices) {
    std::vector<Edge> e;
    for (int v = 0; v + 1 < vertices; ++v)
        e.emplace_back(v, v + 1);
    return Graph(vertices, std::move(e));
}

Graph star_graph(int leaves) {
    std::vector<Edge> e;
    for (int v = 1; v <= leaves; ++v)
        e.emplace_back(0, v);
    return Graph(leaves + 1, std::move(e));
}

Graph empty_graph(int n) { return Graph(n); }

Bigraph complete_bigraph(int a, int b) {
    std::vector<Edge> e;
    for (int u = 0; u < a; ++u)
        for (int w = 0; w < b; ++w)
            e.emplace_back(u, w);
    return Bigraph(a, b, std::move(e));
}

Graph hypercube_graph(int dim) {
    const int n = 1 << dim;
    std::vector<Edge> e;
    for (int v = 0; v < n; ++v)
        for (int bit = 0; bit < dim; ++bit)
            if (const int w = v ^ (1 << bit); v < w)
                e.emplace_back(v, w);
    return Graph(n, std::move(e));
}

Graph disjoint_union(const Graph& a, const Graph& b) {
    std::vector<Edge> e = a.edges();
    for (const auto& [u, v] : b.edges())
        e.emplace_back(u + a.vertex_count(), v + a.vertex_count());
    return Graph(a.vertex_count() + b.vertex_count(), std::move(e));
}

Graph categorical_product(const Graph& a, const Graph& b) {
    const int nb = b.vertex_count();
    std::vector<Edge> e;
    for (const auto& [x1, y1] : a.edges()) {
        for (const auto& [x2, y2] : b.edges()) {
            e.emplace_back(x1 * nb + x2, y1 * nb + y2);
            e.emplace_back(x1 * nb + y2, y1 * nb + x2);
        }
    }
    return Graph(a.vertex_count() * nb, std::move(e));
}

Graph named_graph(std::string_view name) {
    auto fail = [&] { return ParseError("unknown pattern name '" + std::string(name) + "'"); };
    if (name.size() < 3 || name[1] != '_')
        throw fail();
    const char kind = name[0];
    const std::string rest(name.substr(2));
    auto to_int = [&](const std::string& s) {
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw fail();
        return std::stoi(s);
    };
    if (kind == 'K') {
        if (const auto comma = rest.find(','); comma != std::string::npos)
            return complete_bigraph(to_int(rest.substr(0, comma)), to_int(rest.substr(comma + 1))).underlying();
        return complete_graph(to_int(rest));
    }
    const int k = to_int(rest);
    switch (kind) {
    case 'C':
        return cycle_graph(k);
    case 'P':
        return path_graph(k + 1);
    case 'S':
        return star_graph(k);
    case 'Q':
        return hypercube_graph(k);
    case 'E':
        return empty_graph(k);
    default:
        throw fail();
    }
}

namespace {

std::uint32_t edge_mask(const Graph& g, std::span<const int> perm) {
    // Bit index of pair (i, j), i < j, in a fixed enumeration of pairs.
    const int n = g.vertex_count();
    std::uint32_t mask = 0;
    for (const auto& [u, v] : g.edges()) {
        int a = perm[static_cast<std::size_t>(u)];
        int b = perm[static_cast<std::size_t>(v)];
        if (a > b)
            std::swap(a, b);
        const int bit = a * n - a * (a + 1) / 2 + (b - a - 1);
        mask |= 1u << bit;
    }
    return mask;
}

std::string tree_code(const Graph& g, int v, int parent) {
    std::vector<std::string> kids;
    for (int w : g.neighbors(v))
        if (w != parent)
            kids.push_back(tree_code(g, w, v));
    std::sort(kids.begin(), kids.end());
    std::string out = "(";
    for (const auto& k : kids)
        out += k;
    return out + ")";
}

std::string tree_canonical(const Graph& g) {
    // Smallest rooted code over all roots is an isomorphism invariant.
    std::string best;
    for (int r = 0; r < g.vertex_count(); ++r) {
        auto code = tree_code(g, r, -1);
        if (best.empty() || code < best)
            best = std::move(code);
    }
    return best;
}

} // namespace

std::vector<Graph> graphs_up_to_isomorphism(int n) {
    if (n < 0 || n > 6)
        throw ValidationError("graph enumeration supports n <= 6");
    std::vector<Edge> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            pairs.emplace_back(u, v);
    std::vector<std::vector<int>> perms;
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));

    std::set<std::uint32_t> seen;
    std::vector<Graph> out;
    const std::uint32_t total = 1u << pairs.size();
    for (std::uint32_t mask = 0; mask < total; ++mask) {
        std::vector<Edge> e;
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if (mask >> i & 1u)
                e.push_back(pairs[i]);
        Graph g(n, std::move(e));
        std::uint32_t canon = std::numeric_limits<std::uint32_t>::max();
        for (const auto& perm : perms)
            canon = std::min(canon, edge_mask(g, perm));
        if (seen.insert(canon).second)
            out.push_back(std::move(g));
    }
    return out;
}

std::vector<Graph> trees_up_to_isomorphism(int n) {
    if (n < 1 || n > 7)
        throw ValidationError("tree enumeration supports 1 <= n <= 7");
    if (n == 1)
        return {Graph(1)};
    if (n == 2)
        return {path_graph(2)};
    // Decode every Pruefer sequence and keep one tree per canonical code.
    std::set<std::string> seen;
    std::vector<Graph> out;
    std::vector<int> seq(static_cast<std::size_t>(n - 2), 0);
    while (true) {
        std::vector<int> degree(static_cast<std::size_t>(n), 1);
        for (int x : seq)
            ++degree[static_cast<std::size_t>(x)];
        std::vector<Edge> e;
        for (int x : seq) {
            int leaf = 0;
            while (degree[static_cast<std::size_t>(leaf)] != 1)
                ++leaf;
            e.emplace_back(leaf, x);
            --degree[static_cast<std::size_t>(leaf)];
            --degree[static_cast<std::size_t>(x)];
        }
        int u = -1;
        for (int v = 0; v < n; ++v) {
            if (degree[static_cast<std::size_t>(v)] == 1) {
                if (u < 0) {
                    u = v;
                } else {
                    e.emplace_back(u, v);
                    break;
                }
            }
        }
        Graph g(n, std::move(e));
        if (seen.insert(tree_canonical(g)).second)
            out.push_back(std::move(g));

        std::size_t i = 0;
        while (i < seq.size() && ++seq[i] == n)
            seq[i++] = 0;
        if (i == seq.size())
            break;
    }
    return out;
}

} // namespace xlab
