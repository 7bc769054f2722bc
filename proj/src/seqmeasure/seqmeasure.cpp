#include "xlab/seqmeasure.hpp"

#include "xlab/density.hpp"
#include "xlab/errors.hpp"
#include "xlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace xlab {

namespace {

std::size_t power(std::size_t n, std::size_t k) {
    std::size_t s = 1;
    for (std::size_t i = 0; i < k; ++i)
        s *= n;
    return s;
}

void check_table_budget(std::size_t n, int vertices) {
    if (table_volume(n, static_cast<std::size_t>(vertices)) > kMarginalLimit)
        throw BudgetError("measure over [n]^V needs n^|V| <= 1e6");
}

void check_permutation(std::span<const int> order, int vertices) {
    std::vector<char> seen(static_cast<std::size_t>(vertices), 0);
    if (static_cast<int>(order.size()) != vertices)
        throw ValidationError("order is not a permutation of the vertices");
    for (int v : order) {
        if (v < 0 || v >= vertices || seen[static_cast<std::size_t>(v)])
            throw ValidationError("order is not a permutation of the vertices");
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

// Digit of the vertex placed at position `pos` within a tuple of `placed` digits.
inline std::size_t digit(std::size_t tuple, std::size_t pos, std::size_t placed, std::size_t n,
                         const std::vector<std::size_t>& pow_n) {
    return (tuple / pow_n[placed - 1 - pos]) % n;
}

// Converts a table indexed in placement order to vertex-major order.
template <class T>
std::vector<T> to_vertex_major(const std::vector<T>& table, std::span<const int> order, std::size_t n) {
    const std::size_t k = order.size();
    std::vector<T> out(table.size());
    std::vector<std::size_t> stride(k);
    for (std::size_t p = 0; p < k; ++p)
        stride[p] = power(n, k - 1 - static_cast<std::size_t>(order[p]));
    std::vector<std::size_t> digits(k, 0);
    std::size_t target = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        out[target] = table[i];
        for (std::size_t p = k; p-- > 0;) {
            if (++digits[p] < n) {
                target += stride[p];
                break;
            }
            digits[p] = 0;
            target -= (n - 1) * stride[p];
        }
    }
    return out;
}

template <class T>
bool above_null(const T& v) {
    if constexpr (is_exact_v<T>)
        return v > 0;
    else
        return v >= kNullMassThreshold;
}

} // namespace

template <class T>
std::vector<T> tree_distribution(const Tree& t, const MarkovSpace<T>& s, std::span<const int> order) {
    const int nv = t.vertex_count();
    const std::size_t n = s.size();
    check_table_budget(n, nv);
    if (!is_search_order(t, order))
        throw ValidationError("order is not a search order of the tree");
    std::vector<std::size_t> pow_n(static_cast<std::size_t>(nv) + 1, 1);
    for (std::size_t i = 1; i < pow_n.size(); ++i)
        pow_n[i] = pow_n[i - 1] * n;

    std::vector<int> position(static_cast<std::size_t>(nv), -1);
    std::vector<T> table = s.pi();
    position[static_cast<std::size_t>(order[0])] = 0;
    for (std::size_t j = 1; j < order.size(); ++j) {
        const int v = order[j];
        int parent = -1;
        for (int u : t.graph().neighbors(v))
            if (position[static_cast<std::size_t>(u)] >= 0)
                parent = u;
        const auto pp = static_cast<std::size_t>(position[static_cast<std::size_t>(parent)]);
        std::vector<T> next(table.size() * n);
        for (std::size_t tup = 0; tup < table.size(); ++tup) {
            const std::size_t xp = digit(tup, pp, j, n, pow_n);
            const auto row = s.eta().row(xp);
            const T scale = table[tup] / s.pi()[xp];
            for (std::size_t x = 0; x < n; ++x)
                next[tup * n + x] = scale * row[x];
        }
        table = std::move(next);
        position[static_cast<std::size_t>(v)] = static_cast<int>(j);
    }
    return to_vertex_major(table, order, n);
}

template <class T>
SeqMeasureTrace<T> sequential_star_measure(const Graph& g, const MarkovSpace<T>& s, std::span<const int> order) {
    const int nv = g.vertex_count();
    const std::size_t n = s.size();
    check_permutation(order, nv);
    if (!graph_stats(g).triangle_free)
        throw PreconditionError("sequential star measures require a triangle-free pattern");
    check_table_budget(n, nv);
    std::vector<std::size_t> pow_n(static_cast<std::size_t>(nv) + 1, 1);
    for (std::size_t i = 1; i < pow_n.size(); ++i)
        pow_n[i] = pow_n[i - 1] * n;

    const auto w = step_graphon(s).w;
    SeqMeasureTrace<T> trace;
    trace.order.assign(order.begin(), order.end());
    std::vector<std::optional<SkTable<T>>> sk(5);

    std::vector<int> position(static_cast<std::size_t>(nv), -1);
    std::vector<T> rho{T(1)};
    std::vector<T> f{T(1)};
    std::vector<T> psi(n);
    for (std::size_t j = 0; j < order.size(); ++j) {
        const int v = order[j];
        StarStep step;
        step.center = v;
        std::vector<std::size_t> leaf_pos;
        for (int u : g.neighbors(v)) {
            if (position[static_cast<std::size_t>(u)] >= 0) {
                step.leaves.push_back(u);
                leaf_pos.push_back(static_cast<std::size_t>(position[static_cast<std::size_t>(u)]));
            }
        }
        const std::size_t d = leaf_pos.size();
        const SkTable<T>* table = nullptr;
        if (d >= 1 && d <= 4 && table_volume(n, d) <= kMarginalLimit) {
            if (!sk[d])
                sk[d] = s_table(s, static_cast<int>(d));
            table = &*sk[d];
        }

        std::vector<T> next_rho(rho.size() * n);
        std::vector<T> next_f(rho.size() * n);
        std::vector<int> z(d);
        for (std::size_t tup = 0; tup < rho.size(); ++tup) {
            for (std::size_t l = 0; l < d; ++l)
                z[l] = static_cast<int>(digit(tup, leaf_pos[l], j, n, pow_n));
            T total = 0;
            for (std::size_t x = 0; x < n; ++x) {
                T val = s.pi()[x];
                for (int zl : z)
                    val *= w(x, static_cast<std::size_t>(zl));
                psi[x] = val;
                total += val;
            }
            if (table)
                step.psi_normalization_defect = std::max(
                    step.psi_normalization_defect, std::abs(to_double(T(total - table->at(z)))));
            if (!above_null(total)) {
                if (above_null(rho[tup]))
                    ++step.null_tuples;
                for (std::size_t x = 0; x < n; ++x) {
                    next_rho[tup * n + x] = 0;
                    next_f[tup * n + x] = 0;
                }
                continue;
            }
            const T sf = f[tup] * total;
            for (std::size_t x = 0; x < n; ++x) {
                next_rho[tup * n + x] = rho[tup] * (psi[x] / total);
                next_f[tup * n + x] = sf;
            }
        }
        rho = std::move(next_rho);
        f = std::move(next_f);
        position[static_cast<std::size_t>(v)] = static_cast<int>(j);
        trace.steps.push_back(std::move(step));
    }

    std::vector<T> eta(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i)
        eta[i] = f[i] * rho[i];
    trace.rho = to_vertex_major(rho, order, n);
    trace.f = to_vertex_major(f, order, n);
    trace.eta = to_vertex_major(eta, order, n);
    return trace;
}

template <class T>
OrderReport order_independence_report(const Graph& g, const MarkovSpace<T>& s, int n_orders, std::uint64_t seed) {
    const int nv = g.vertex_count();
    std::vector<std::vector<int>> orders;
    std::vector<int> id(static_cast<std::size_t>(nv));
    std::iota(id.begin(), id.end(), 0);
    orders.push_back(id);
    orders.emplace_back(id.rbegin(), id.rend());
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n_orders; ++i) {
        auto p = id;
        std::shuffle(p.begin(), p.end(), rng);
        orders.push_back(std::move(p));
    }
    const auto traces = parallel_map<SeqMeasureTrace<T>>(
        orders.size(), [&](std::size_t i) { return sequential_star_measure(g, s, orders[i]); });
    const auto reference = HomMeasure<T>(g, s).materialize();

    OrderReport report;
    report.orders_tested = static_cast<int>(orders.size());
    for (const auto& tr : traces) {
        const auto& t = tr.eta;
        OrderRow row;
        row.order = tr.order;
        T mass = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            mass += t[i];
            row.deviation = std::max(row.deviation, std::abs(to_double(T(t[i] - traces[0].eta[i]))));
            row.deviation_vs_hom = std::max(row.deviation_vs_hom, std::abs(to_double(T(t[i] - reference[i]))));
        }
        row.total_mass = to_double(mass);
        for (const auto& step : tr.steps)
            row.null_tuples += step.null_tuples;
        report.max_deviation = std::max(report.max_deviation, row.deviation);
        report.max_deviation_vs_hom = std::max(report.max_deviation_vs_hom, row.deviation_vs_hom);
        report.rows.push_back(std::move(row));
    }
    return report;
}

#define XLAB_INSTANTIATE(T)                                                                                      \
    template std::vector<T> tree_distribution(const Tree&, const MarkovSpace<T>&, std::span<const int>);         \
    template SeqMeasureTrace<T> sequential_star_measure(const Graph&, const MarkovSpace<T>&, std::span<const int>); \
    template OrderReport order_independence_report(const Graph&, const MarkovSpace<T>&, int, std::uint64_t);

XLAB_INSTANTIATE(double)
XLAB_INSTANTIATE(Rational)

#undef XLAB_INSTANTIATE

// --- Sphere -------------------------------------------------------------------

std::optional<std::vector<Vec>> sphere_sequential_sample(const Graph& g, int d, std::span<const int> order,
                                                         std::mt19937_64& rng) {
    check_permutation(order, g.vertex_count());
    if (!graph_stats(g).triangle_free)
        throw PreconditionError("sequential sphere sampling requires a triangle-free pattern");
    std::vector<Vec> images(static_cast<std::size_t>(g.vertex_count()));
    std::vector<char> placed(images.size(), 0);
    for (int v : order) {
        std::vector<Vec> anchors;
        for (int u : g.neighbors(v))
            if (placed[static_cast<std::size_t>(u)])
                anchors.push_back(images[static_cast<std::size_t>(u)]);
        auto x = sphere_conditional_sample(d, anchors, rng);
        if (!x)
            return std::nullopt;
        images[static_cast<std::size_t>(v)] = std::move(*x);
        placed[static_cast<std::size_t>(v)] = 1;
    }
    return images;
}

std::optional<std::vector<Vec>> sphere_sequential_sample(const Graph& g, int d, std::span<const int> order,
                                                         std::uint64_t seed) {
    auto rng = sample_rng(seed, 0);
    return sphere_sequential_sample(g, d, order, rng);
}

double ks_uniform(std::vector<double> samples, double lo, double hi) {
    std::erase_if(samples, [](double x) { return std::isnan(x); });
    if (samples.empty())
        return 1.0;
    std::sort(samples.begin(), samples.end());
    const double m = static_cast<double>(samples.size());
    double stat = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = std::clamp((samples[i] - lo) / (hi - lo), 0.0, 1.0);
        stat = std::max({stat, static_cast<double>(i + 1) / m - cdf, cdf - static_cast<double>(i) / m});
    }
    return stat;
}

namespace {

std::vector<long> histogram(const std::vector<double>& xs) {
    std::vector<long> bins(40, 0);
    for (double x : xs) {
        if (std::isnan(x))
            continue;
        const auto b = static_cast<long>(std::floor((std::clamp(x, -1.0, 1.0) + 1.0) / 0.05));
        ++bins[static_cast<std::size_t>(std::clamp(b, 0L, 39L))];
    }
    return bins;
}

} // namespace

K22Result k22_order_experiment(int d, long n_samples, std::uint64_t seed) {
    if (d != 3)
        throw ValidationError("the K_{2,2} order experiment supports d = 3 only");
    if (n_samples < 1000)
        throw ValidationError("the K_{2,2} order experiment needs at least 1000 samples");
    // u1 = 0, u2 = 1, v1 = 2, v2 = 3
    const Graph k22 = complete_bigraph(2, 2).underlying();
    const std::vector<int> order_a = {0, 1, 2, 3};
    const std::vector<int> order_b = {0, 2, 3, 1};
    const double nan = std::numeric_limits<double>::quiet_NaN();

    K22Result r;
    r.d = d;
    auto run = [&](const std::vector<int>& order, std::uint64_t lane) {
        return parallel_map<double>(static_cast<std::size_t>(n_samples), [&](std::size_t i) {
            auto rng = sample_rng(seed, 2 * static_cast<std::uint64_t>(i) + lane);
            const auto x = sphere_sequential_sample(k22, d, order, rng);
            return x ? inner((*x)[0], (*x)[1]) : nan;
        });
    };
    r.order_a = run(order_a, 0);
    r.order_b = run(order_b, 1);
    for (const auto* xs : {&r.order_a, &r.order_b})
        r.degenerate += std::count_if(xs->begin(), xs->end(), [](double x) { return std::isnan(x); });
    r.hist_a = histogram(r.order_a);
    r.hist_b = histogram(r.order_b);
    r.ks_vs_uniform = ks_uniform(r.order_a, -1.0, 1.0);
    const auto at_one =
        std::count_if(r.order_b.begin(), r.order_b.end(), [](double x) { return std::abs(x) > 1.0 - 1e-6; });
    r.mass_at_one = static_cast<double>(at_one) / static_cast<double>(n_samples);
    return r;
}

std::string k22_csv(const K22Result& r) {
    std::string out = "order,sample_index,inner_product\n";
    char buf[64];
    for (const auto& [label, xs] : {std::pair{"A", &r.order_a}, std::pair{"B", &r.order_b}}) {
        for (std::size_t i = 0; i < xs->size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s,%zu,%.17g\n", label, i, (*xs)[i]);
            out += buf;
        }
    }
    return out;
}

} // namespace xlab
