#include "xlab/errors.hpp"
#include "xlab/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace xlab {

namespace {

// Adjacency as bitmasks; at most 17 vertices survive the edge budget that
// matters (isolated vertices are factored out before recursion).
struct Small {
    int n = 0;
    std::vector<std::uint32_t> adj;

    int edges() const {
        int e = 0;
        for (auto a : adj)
            e += __builtin_popcount(a);
        return e / 2;
    }
};

using Key = std::vector<std::uint32_t>;

// Relabels vertices by (degree, sorted neighbor degrees) so isomorphic
// subproblems usually share a memo key. Any relabeling is sound since the
// chromatic polynomial is an isomorphism invariant.
Key canonical_key(const Small& g) {
    const int n = g.n;
    std::vector<std::pair<std::vector<int>, int>> sig(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        std::vector<int> s{__builtin_popcount(g.adj[static_cast<std::size_t>(v)])};
        for (int w = 0; w < n; ++w)
            if (g.adj[static_cast<std::size_t>(v)] >> w & 1u)
                s.push_back(__builtin_popcount(g.adj[static_cast<std::size_t>(w)]));
        std::sort(s.begin() + 1, s.end());
        sig[static_cast<std::size_t>(v)] = {std::move(s), v};
    }
    std::sort(sig.begin(), sig.end());
    std::vector<int> relabel(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        relabel[static_cast<std::size_t>(sig[static_cast<std::size_t>(i)].second)] = i;
    Key key(static_cast<std::size_t>(n) + 1, 0);
    key[0] = static_cast<std::uint32_t>(n);
    for (int v = 0; v < n; ++v) {
        std::uint32_t row = 0;
        for (int w = 0; w < n; ++w)
            if (g.adj[static_cast<std::size_t>(v)] >> w & 1u)
                row |= 1u << relabel[static_cast<std::size_t>(w)];
        key[static_cast<std::size_t>(relabel[static_cast<std::size_t>(v)]) + 1] = row;
    }
    return key;
}

IntPolynomial falling_factorial(int n) {
    IntPolynomial p({1});
    for (int i = 0; i < n; ++i)
        p = p * IntPolynomial({-i, 1});
    return p;
}

IntPolynomial power_of_q(int n) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(n) + 1, 0);
    c.back() = 1;
    return IntPolynomial(std::move(c));
}

class ChromaticSolver {
public:
    IntPolynomial solve(const Small& g) {
        const int e = g.edges();
        if (e == 0)
            return power_of_q(g.n);
        if (e == g.n * (g.n - 1) / 2)
            return falling_factorial(g.n);
        auto key = canonical_key(g);
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;

        // Split on the first edge (u, v) with u lowest.
        int u = 0;
        while (g.adj[static_cast<std::size_t>(u)] == 0)
            ++u;
        const int v = __builtin_ctz(g.adj[static_cast<std::size_t>(u)]);

        Small deleted = g;
        deleted.adj[static_cast<std::size_t>(u)] &= ~(1u << v);
        deleted.adj[static_cast<std::size_t>(v)] &= ~(1u << u);

        auto result = solve(deleted) - solve(contract(deleted, u, v));
        memo_.emplace(std::move(key), result);
        return result;
    }

private:
    // Merges v into u and drops vertex v, reindexing the rest.
    static Small contract(const Small& g, int u, int v) {
        Small merged = g;
        merged.adj[static_cast<std::size_t>(u)] |= g.adj[static_cast<std::size_t>(v)];
        for (int w = 0; w < g.n; ++w)
            if (g.adj[static_cast<std::size_t>(v)] >> w & 1u)
                merged.adj[static_cast<std::size_t>(w)] |= 1u << u;
        merged.adj[static_cast<std::size_t>(u)] &= ~((1u << u) | (1u << v));
        Small out;
        out.n = g.n - 1;
        auto squeeze = [v](std::uint32_t row) {
            const std::uint32_t low = row & ((1u << v) - 1u);
            const std::uint32_t high = (row >> (v + 1)) << v;
            return low | high;
        };
        for (int w = 0; w < g.n; ++w)
            if (w != v)
                out.adj.push_back(squeeze(merged.adj[static_cast<std::size_t>(w)]));
        return out;
    }

    std::map<Key, IntPolynomial> memo_;
};

} // namespace

IntPolynomial chromatic_polynomial(const Graph& g) {
    if (g.edge_count() > kChromaticEdgeBudget)
        throw BudgetError("chromatic polynomial: " + std::to_string(g.edge_count()) +
                          " edges exceed the deletion-contraction budget of " +
                          std::to_string(kChromaticEdgeBudget));
    // Isolated vertices contribute a factor q each.
    std::vector<int> active;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) > 0)
            active.push_back(v);
    const int isolated = g.vertex_count() - static_cast<int>(active.size());
    const Graph core = g.induced(active);
    Small s;
    s.n = core.vertex_count();
    s.adj.assign(static_cast<std::size_t>(s.n), 0);
    for (const auto& [a, b] : core.edges()) {
        s.adj[static_cast<std::size_t>(a)] |= 1u << b;
        s.adj[static_cast<std::size_t>(b)] |= 1u << a;
    }
    ChromaticSolver solver;
    return solver.solve(s) * power_of_q(isolated);
}

} // namespace xlab
