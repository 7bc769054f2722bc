#pragma once

// Variable-elimination engine over discrete factors. Every variable ranges
// over the same atom set [n]. A factor table is dense row-major over its
// scope with the last scope variable varying fastest.

#include "xlab/rational.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace xlab {

template <class T>
struct Factor {
    std::vector<int> scope;
    std::vector<T> table;
};

struct EngineOptions {
    /// Upper bound on n^(w+1) for the induced width w of the elimination.
    double budget = 1e8;
    /// Zero fraction from which a factor drives a sparse slice loop.
    double sparse_threshold = 0.9;
};

struct ContractionStats {
    int induced_width = 0;
    double work = 0.0; // sum over steps of n^(|scope| + 1)
    int sparse_steps = 0;
};

/// n^k as a double (no overflow).
double table_volume(std::size_t n, std::size_t k);

/// Sums the product of `factors` over every variable not listed in `keep`.
/// The result's scope is `keep`, in the given order. Elimination follows the
/// greedy min-fill order of the interaction graph. Throws BudgetError when
/// n^(w+1) or the kept table size exceeds `options.budget`.
template <class T>
Factor<T> contract(std::vector<Factor<T>> factors, int var_count, std::size_t n, std::span<const int> keep,
                   const EngineOptions& options = {}, ContractionStats* stats = nullptr);

/// Induced width of the elimination `contract` would perform.
int contraction_width(std::span<const std::vector<int>> scopes, int var_count, std::span<const int> keep);

} // namespace xlab
