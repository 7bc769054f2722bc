#include "xlab/graph.hpp"

#include <algorithm>
#include <set>

namespace xlab {

EliminationOrder elimination_order(const Graph& g) { return elimination_order(g, {}); }

EliminationOrder elimination_order(const Graph& g, std::span<const int> keep) {
    const int n = g.vertex_count();
    std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
    for (const auto& [u, v] : g.edges()) {
        adj[static_cast<std::size_t>(u)].insert(v);
        adj[static_cast<std::size_t>(v)].insert(u);
    }
    std::vector<char> remaining(static_cast<std::size_t>(n), 1);
    std::vector<char> kept(static_cast<std::size_t>(n), 0);
    for (int v : keep)
        kept.at(static_cast<std::size_t>(v)) = 1;

    EliminationOrder out;
    const int to_eliminate = n - static_cast<int>(std::count(kept.begin(), kept.end(), 1));
    for (int step = 0; step < to_eliminate; ++step) {
        int best = -1;
        long best_fill = 0;
        for (int v = 0; v < n; ++v) {
            if (!remaining[static_cast<std::size_t>(v)] || kept[static_cast<std::size_t>(v)])
                continue;
            const auto& nb = adj[static_cast<std::size_t>(v)];
            long fill = 0;
            for (auto a = nb.begin(); a != nb.end(); ++a)
                for (auto b = std::next(a); b != nb.end(); ++b)
                    if (!adj[static_cast<std::size_t>(*a)].count(*b))
                        ++fill;
            if (best < 0 || fill < best_fill) {
                best = v;
                best_fill = fill;
            }
        }
        const auto nb = adj[static_cast<std::size_t>(best)];
        out.induced_width = std::max(out.induced_width, static_cast<int>(nb.size()));
        for (int a : nb) {
            adj[static_cast<std::size_t>(a)].erase(best);
            for (int b : nb)
                if (a != b)
                    adj[static_cast<std::size_t>(a)].insert(b);
        }
        adj[static_cast<std::size_t>(best)].clear();
        remaining[static_cast<std::size_t>(best)] = 0;
        out.order.push_back(best);
    }
    return out;
}

} // namespace xlab
