#include "xlab/factor.hpp"

#include "xlab/errors.hpp"
#include "xlab/graph.hpp"
#include "xlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace xlab {

double table_volume(std::size_t n, std::size_t k) { return std::pow(static_cast<double>(n), static_cast<double>(k)); }

namespace {

std::size_t checked_size(std::size_t n, std::size_t k) {
    std::size_t s = 1;
    for (std::size_t i = 0; i < k; ++i)
        s *= n;
    return s;
}

Graph interaction_graph(std::span<const std::vector<int>> scopes, int var_count) {
    std::vector<Edge> edges;
    for (const auto& scope : scopes)
        for (std::size_t a = 0; a < scope.size(); ++a)
            for (std::size_t b = a + 1; b < scope.size(); ++b)
                if (scope[a] != scope[b])
                    edges.emplace_back(std::min(scope[a], scope[b]), std::max(scope[a], scope[b]));
    return Graph(var_count, std::move(edges));
}

// Strides of factor `f` along the variables of `axes` (0 where absent).
template <class T>
std::vector<std::size_t> strides_along(const Factor<T>& f, std::span<const int> axes, std::size_t n) {
    std::vector<std::size_t> out(axes.size(), 0);
    std::size_t stride = 1;
    for (std::size_t p = f.scope.size(); p-- > 0;) {
        for (std::size_t k = 0; k < axes.size(); ++k)
            if (axes[k] == f.scope[p])
                out[k] = stride;
        stride *= n;
    }
    return out;
}

// Odometer over [n]^axes, maintaining one offset per factor.
class Odometer {
public:
    Odometer(std::size_t n, std::vector<std::vector<std::size_t>> strides)
        : n_(n), strides_(std::move(strides)), digits_(strides_.empty() ? 0 : strides_[0].size(), 0),
          offsets_(strides_.size(), 0) {}

    const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }

    void advance() {
        for (std::size_t k = digits_.size(); k-- > 0;) {
            if (++digits_[k] < n_) {
                for (std::size_t f = 0; f < offsets_.size(); ++f)
                    offsets_[f] += strides_[f][k];
                return;
            }
            digits_[k] = 0;
            for (std::size_t f = 0; f < offsets_.size(); ++f)
                offsets_[f] -= (n_ - 1) * strides_[f][k];
        }
    }

private:
    std::size_t n_;
    std::vector<std::vector<std::size_t>> strides_;
    std::vector<std::size_t> digits_;
    std::vector<std::size_t> offsets_;
};

// Reorders a factor's table to `new_scope` (a permutation of its scope).
template <class T>
Factor<T> permuted(const Factor<T>& f, std::vector<int> new_scope, std::size_t n) {
    if (new_scope == f.scope)
        return f;
    Factor<T> out{std::move(new_scope), std::vector<T>(f.table.size())};
    Odometer odo(n, {strides_along(f, out.scope, n)});
    for (std::size_t i = 0; i < out.table.size(); ++i) {
        out.table[i] = f.table[odo.offsets()[0]];
        odo.advance();
    }
    return out;
}

// Multiplies factors whose scope lies inside another factor's scope into it.
template <class T>
void absorb_subsets(std::vector<Factor<T>>& factors, std::size_t n) {
    std::vector<std::size_t> idx(factors.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return factors[a].scope.size() < factors[b].scope.size(); });
    std::vector<char> removed(factors.size(), 0);
    for (std::size_t ii = 0; ii < idx.size(); ++ii) {
        const auto& f = factors[idx[ii]];
        if (f.scope.empty())
            continue;
        for (std::size_t jj = ii + 1; jj < idx.size(); ++jj) {
            auto& g = factors[idx[jj]];
            if (removed[idx[jj]])
                continue;
            const bool contains = std::all_of(f.scope.begin(), f.scope.end(), [&](int v) {
                return std::find(g.scope.begin(), g.scope.end(), v) != g.scope.end();
            });
            if (!contains)
                continue;
            Odometer odo(n, {strides_along(f, g.scope, n)});
            for (auto& v : g.table) {
                v *= f.table[odo.offsets()[0]];
                odo.advance();
            }
            removed[idx[ii]] = 1;
            break;
        }
    }
    std::vector<Factor<T>> kept;
    for (std::size_t i = 0; i < factors.size(); ++i)
        if (!removed[i])
            kept.push_back(std::move(factors[i]));
    factors = std::move(kept);
}

template <class T>
T slice_reduce(const std::vector<const T*>& slices, std::size_t n, std::vector<T>& buf) {
    switch (slices.size()) {
    case 0:
        return T(static_cast<long>(n));
    case 1:
        return kernels::sum(std::span<const T>(slices[0], n));
    case 2:
        return kernels::dot(std::span<const T>(slices[0], n), std::span<const T>(slices[1], n));
    default: {
        std::span<T> b(buf.data(), n);
        kernels::mul(std::span<const T>(slices[0], n), std::span<const T>(slices[1], n), b);
        for (std::size_t j = 2; j + 1 < slices.size(); ++j)
            kernels::mul(std::span<const T>(b), std::span<const T>(slices[j], n), b);
        return kernels::dot(std::span<const T>(b), std::span<const T>(slices.back(), n));
    }
    }
}

template <class T>
bool is_zero(const T& v) {
    return v == 0;
}

template <class T>
Factor<T> eliminate(std::vector<Factor<T>>& bucket, int v, std::size_t n, double sparse_threshold, bool& sparse) {
    std::vector<int> out_scope;
    for (const auto& f : bucket)
        for (int u : f.scope)
            if (u != v)
                out_scope.push_back(u);
    std::sort(out_scope.begin(), out_scope.end());
    out_scope.erase(std::unique(out_scope.begin(), out_scope.end()), out_scope.end());

    // Put v last so every slice is contiguous.
    std::vector<Factor<T>> perm;
    perm.reserve(bucket.size());
    for (const auto& f : bucket) {
        std::vector<int> s;
        for (int u : out_scope)
            if (std::find(f.scope.begin(), f.scope.end(), u) != f.scope.end())
                s.push_back(u);
        s.push_back(v);
        perm.push_back(permuted(f, std::move(s), n));
    }
    std::vector<std::vector<std::size_t>> strides;
    for (const auto& f : perm)
        strides.push_back(strides_along(f, out_scope, n));

    // Sparse driver: the sparsest factor, if sparse enough.
    std::size_t driver = perm.size();
    double best_zero = sparse_threshold;
    for (std::size_t f = 0; f < perm.size(); ++f) {
        const auto zeros = std::count_if(perm[f].table.begin(), perm[f].table.end(), is_zero<T>);
        const double frac = static_cast<double>(zeros) / static_cast<double>(perm[f].table.size());
        if (frac >= best_zero) {
            best_zero = frac;
            driver = f;
        }
    }
    std::vector<std::vector<std::uint32_t>> nz;
    if (driver < perm.size()) {
        sparse = true;
        const auto& t = perm[driver].table;
        nz.resize(t.size() / n);
        for (std::size_t s = 0; s < nz.size(); ++s)
            for (std::size_t i = 0; i < n; ++i)
                if (!is_zero(t[s * n + i]))
                    nz[s].push_back(static_cast<std::uint32_t>(i));
    }

    Factor<T> out{out_scope, std::vector<T>(checked_size(n, out_scope.size()))};
    Odometer odo(n, std::move(strides));
    std::vector<const T*> slices(perm.size());
    std::vector<T> buf(n);
    for (auto& cell : out.table) {
        const auto& off = odo.offsets();
        if (driver < perm.size()) {
            T acc = 0;
            for (std::uint32_t i : nz[off[driver] / n]) {
                T prod = perm[driver].table[off[driver] + i];
                for (std::size_t f = 0; f < perm.size(); ++f)
                    if (f != driver)
                        prod *= perm[f].table[off[f] + i];
                acc += prod;
            }
            cell = acc;
        } else {
            for (std::size_t f = 0; f < perm.size(); ++f)
                slices[f] = perm[f].table.data() + off[f];
            cell = slice_reduce(slices, n, buf);
        }
        odo.advance();
    }
    return out;
}

} // namespace

int contraction_width(std::span<const std::vector<int>> scopes, int var_count, std::span<const int> keep) {
    return elimination_order(interaction_graph(scopes, var_count), keep).induced_width;
}

template <class T>
Factor<T> contract(std::vector<Factor<T>> factors, int var_count, std::size_t n, std::span<const int> keep,
                   const EngineOptions& options, ContractionStats* stats) {
    if (n == 0)
        throw ValidationError("contraction over an empty atom set");
    for (const auto& f : factors) {
        if (f.table.size() != checked_size(n, f.scope.size()))
            throw ValidationError("factor table size does not match its scope");
        for (int v : f.scope)
            if (v < 0 || v >= var_count)
                throw ValidationError("factor scope variable out of range");
    }
    std::vector<std::vector<int>> scopes;
    for (const auto& f : factors)
        scopes.push_back(f.scope);
    const auto order = elimination_order(interaction_graph(scopes, var_count), keep);
    const double need = std::max(table_volume(n, static_cast<std::size_t>(order.induced_width) + 1),
                                 table_volume(n, keep.size()));
    if (need > options.budget) {
        char msg[200];
        std::snprintf(msg, sizeof msg,
                      "contraction needs %.3g table entries (n=%zu, width %d), budget is %.3g; use a coarser space",
                      need, n, order.induced_width, options.budget);
        throw BudgetError(msg);
    }
    ContractionStats local;
    local.induced_width = order.induced_width;

    absorb_subsets(factors, n);
    for (int v : order.order) {
        std::vector<Factor<T>> bucket;
        std::vector<Factor<T>> rest;
        for (auto& f : factors) {
            if (std::find(f.scope.begin(), f.scope.end(), v) != f.scope.end())
                bucket.push_back(std::move(f));
            else
                rest.push_back(std::move(f));
        }
        bool sparse = false;
        auto out = eliminate(bucket, v, n, options.sparse_threshold, sparse);
        local.work += table_volume(n, out.scope.size() + 1);
        local.sparse_steps += sparse ? 1 : 0;
        rest.push_back(std::move(out));
        factors = std::move(rest);
    }

    if (stats)
        *stats = local;

    // Remaining scopes lie inside `keep`; take their outer product.
    Factor<T> result{std::vector<int>(keep.begin(), keep.end()), std::vector<T>(checked_size(n, keep.size()), T(1))};
    if (factors.empty())
        return result;
    std::vector<std::vector<std::size_t>> strides;
    for (const auto& f : factors)
        strides.push_back(strides_along(f, keep, n));
    Odometer odo(n, std::move(strides));
    for (auto& cell : result.table) {
        const auto& off = odo.offsets();
        T prod = factors[0].table[off[0]];
        for (std::size_t f = 1; f < factors.size(); ++f)
            prod *= factors[f].table[off[f]];
        cell = prod;
        odo.advance();
    }
    return result;
}

template Factor<double> contract(std::vector<Factor<double>>, int, std::size_t, std::span<const int>,
                                 const EngineOptions&, ContractionStats*);
template Factor<Rational> contract(std::vector<Factor<Rational>>, int, std::size_t, std::span<const int>,
                                   const EngineOptions&, ContractionStats*);

} // namespace xlab
