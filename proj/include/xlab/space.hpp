#pragma once

// Finite Markov spaces: a symmetric nonnegative edge-mass matrix eta with
// total mass 1 and strictly positive marginal pi. Instantiated for binary64
// (`double`) and for exact rationals (`Rational`).

#include "xlab/rational.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace xlab {

enum class NumericMode { Float64, Rational };

/// Dense row-major square matrix.
template <class T>
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, const T& fill = T(0)) : n_(n), data_(n * n, fill) {}
    SquareMatrix(std::size_t n, std::vector<T> data);

    std::size_t size() const noexcept { return n_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    std::span<T> row(std::size_t i) { return {data_.data() + i * n_, n_}; }
    std::span<const T> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
    const std::vector<T>& data() const noexcept { return data_; }
    std::vector<T>& data() noexcept { return data_; }

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<T> data_;
};

/// Tolerances of the binary64 mode.
inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kMassTolerance = 1e-12;
inline constexpr std::size_t kMaxRationalAtoms = 64;

template <class T>
class MarkovSpace {
public:
    /// Validates `m` (symmetric, nonnegative, no zero row) and, if
    /// `normalize`, rescales it to total mass 1. Without `normalize` the total
    /// mass must already be 1.
    static MarkovSpace from_matrix(SquareMatrix<T> m, bool normalize);

    std::size_t size() const noexcept { return eta_.size(); }
    const SquareMatrix<T>& eta() const noexcept { return eta_; }
    const std::vector<T>& pi() const noexcept { return pi_; }
    NumericMode mode() const noexcept { return is_exact_v<T> ? NumericMode::Rational : NumericMode::Float64; }

    /// Edge mass of A x B for atom sets given as index lists.
    T mass(std::span<const int> a, std::span<const int> b) const;

    friend bool operator==(const MarkovSpace&, const MarkovSpace&) = default;

private:
    MarkovSpace(SquareMatrix<T> eta, std::vector<T> pi) : eta_(std::move(eta)), pi_(std::move(pi)) {}

    SquareMatrix<T> eta_;
    std::vector<T> pi_;
};

using FloatSpace = MarkovSpace<double>;
using ExactSpace = MarkovSpace<Rational>;
using AnySpace = std::variant<FloatSpace, ExactSpace>;

/// Markov space together with its step graphon W = eta / (pi x pi).
template <class T>
struct StepGraphon {
    MarkovSpace<T> space;
    SquareMatrix<T> w;
};

template <class T>
MarkovSpace<T> space_from_matrix(SquareMatrix<T> m, bool normalize) {
    return MarkovSpace<T>::from_matrix(std::move(m), normalize);
}

template <class T>
StepGraphon<T> step_graphon(const MarkovSpace<T>& s);

/// max_i |sum_j W[i][j] pi[j] - 1|.
template <class T>
double regularity_defect(const StepGraphon<T>& g);

// --- Partitions ---------------------------------------------------------------

/// Surjection of atoms onto blocks 0..block_count-1.
class Partition {
public:
    /// Blocks are renumbered by first occurrence; every block is nonempty.
    explicit Partition(std::vector<int> block_of);

    static Partition identity(std::size_t n_atoms);
    static Partition trivial(std::size_t n_atoms);
    /// `blocks` contiguous runs of near-equal length (interval partition).
    static Partition intervals(std::size_t n_atoms, std::size_t blocks);

    std::size_t atom_count() const noexcept { return block_of_.size(); }
    std::size_t block_count() const noexcept { return block_count_; }
    int block_of(std::size_t atom) const { return block_of_.at(atom); }
    const std::vector<int>& blocks() const noexcept { return block_of_; }
    std::vector<std::vector<int>> members() const;

    /// True iff every block of *this lies inside one block of `coarser`.
    bool refines(const Partition& coarser) const;

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<int> block_of_;
    std::size_t block_count_ = 0;
};

/// Partitions over one atom set, each refining its predecessor.
class RefinementSequence {
public:
    explicit RefinementSequence(std::vector<Partition> levels);

    /// P_m with 2^m contiguous blocks, m = 1..levels; n_atoms must be
    /// divisible by 2^levels.
    static RefinementSequence dyadic(std::size_t n_atoms, int levels);

    const std::vector<Partition>& levels() const noexcept { return levels_; }

private:
    std::vector<Partition> levels_;
};

/// Stepping operator: same atom set, eta averaged over block cells with pi
/// preserved.
template <class T>
MarkovSpace<T> project(const MarkovSpace<T>& s, const Partition& p);

/// Block-level space: one atom per block, eta'(a, b) = eta(A x B). Every
/// homomorphism density of `quotient(s, p)` equals that of `project(s, p)`.
template <class T>
MarkovSpace<T> quotient(const MarkovSpace<T>& s, const Partition& p);

/// Atoms are pairs (x1, x2) with index x1 * b.size() + x2.
template <class T>
MarkovSpace<T> product_space(const MarkovSpace<T>& a, const MarkovSpace<T>& b);

/// sum_{x,y} f[x] g[y] eta[x][y].
template <class T>
T adjacency_form(const MarkovSpace<T>& s, std::span<const T> f, std::span<const T> g);

/// Uniform distribution on the (oriented) edges of a simple graph given by
/// its edge list over `vertex_count` vertices.
template <class T>
MarkovSpace<T> graph_space(int vertex_count, std::span<const std::pair<int, int>> edges);

FloatSpace to_float(const ExactSpace& s);
inline const FloatSpace& to_float(const FloatSpace& s) { return s; }

/// Random symmetric space: entries uniform on (0, 1], a fraction
/// `zero_fraction` of off-diagonal pairs zeroed, rows kept nonzero.
FloatSpace random_space(std::size_t n, std::mt19937_64& rng, double zero_fraction = 0.0);

/// Random exact space with small integer weights in [0, max_weight].
ExactSpace random_exact_space(std::size_t n, std::mt19937_64& rng, int max_weight = 6);

/// Random partition of n atoms into at most `max_blocks` nonempty blocks.
Partition random_partition(std::size_t n, std::size_t max_blocks, std::mt19937_64& rng);

/// Random coarsening of `p` (merges its blocks).
Partition random_coarsening(const Partition& p, std::mt19937_64& rng);

// --- JSON -------------------------------------------------------------------------

/// `{"n": int, "eta": [[...]], "mode": "f64"|"rational"}`; rational entries are
/// "p/q" strings. A `{"graphon": name, "atoms": n, "params": {...}}` document
/// discretizes a built-in graphon instead. The matrix is normalized on load.
AnySpace parse_space_json(const std::string& text);
AnySpace load_space(const std::string& path);
std::string space_to_json(const AnySpace& s);

} // namespace xlab
