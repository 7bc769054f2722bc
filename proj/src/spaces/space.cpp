#include "xlab/space.hpp"

#include "xlab/errors.hpp"
#include "xlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace xlab {

template <class T>
SquareMatrix<T>::SquareMatrix(std::size_t n, std::vector<T> data) : n_(n), data_(std::move(data)) {
    if (data_.size() != n * n)
        throw ValidationError("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                              std::to_string(n * n));
}

template <class T>
MarkovSpace<T> MarkovSpace<T>::from_matrix(SquareMatrix<T> m, bool normalize) {
    const std::size_t n = m.size();
    if (n == 0)
        throw ValidationError("a Markov space needs at least one atom");
    if constexpr (is_exact_v<T>) {
        if (n > kMaxRationalAtoms)
            throw ValidationError("rational mode supports at most " + std::to_string(kMaxRationalAtoms) + " atoms");
    }

    double scale = 1.0;
    for (const auto& v : m.data()) {
        if (v < 0)
            throw ValidationError("negative edge mass");
        scale = std::max(scale, to_double(v));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if constexpr (is_exact_v<T>) {
                if (m(i, j) != m(j, i))
                    throw ValidationError("matrix is not symmetric at (" + std::to_string(i) + ", " +
                                          std::to_string(j) + ")");
            } else {
                if (std::abs(m(i, j) - m(j, i)) > kSymmetryTolerance * scale)
                    throw ValidationError("matrix is not symmetric at (" + std::to_string(i) + ", " +
                                          std::to_string(j) + ")");
                const double avg = 0.5 * (m(i, j) + m(j, i));
                m(i, j) = avg;
                m(j, i) = avg;
            }
        }
    }

    T total = 0;
    for (const auto& v : m.data())
        total += v;
    if (total == 0)
        throw DegeneracyError("matrix has no positive entry");
    if (normalize) {
        for (auto& v : m.data())
            v /= total;
    } else {
        if constexpr (is_exact_v<T>) {
            if (total != 1)
                throw ValidationError("total edge mass is " + to_string(total) + ", expected 1");
        } else {
            if (std::abs(total - 1.0) > kMassTolerance)
                throw ValidationError("total edge mass is " + format_double(total) + ", expected 1");
        }
    }

    std::vector<T> pi(n, T(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            pi[i] += m(i, j);
        if (!(pi[i] > 0))
            throw DegeneracyError("atom " + std::to_string(i) + " has zero marginal mass");
    }
    return MarkovSpace(std::move(m), std::move(pi));
}

template <class T>
T MarkovSpace<T>::mass(std::span<const int> a, std::span<const int> b) const {
    T acc = 0;
    for (int x : a)
        for (int y : b)
            acc += eta_(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    return acc;
}

template <class T>
StepGraphon<T> step_graphon(const MarkovSpace<T>& s) {
    const std::size_t n = s.size();
    SquareMatrix<T> w(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            w(i, j) = s.eta()(i, j) / (s.pi()[i] * s.pi()[j]);
    return {s, std::move(w)};
}

template <class T>
double regularity_defect(const StepGraphon<T>& g) {
    double worst = 0.0;
    const auto& pi = g.space.pi();
    for (std::size_t i = 0; i < pi.size(); ++i) {
        T acc = 0;
        for (std::size_t j = 0; j < pi.size(); ++j)
            acc += g.w(i, j) * pi[j];
        worst = std::max(worst, std::abs(to_double(acc) - 1.0));
    }
    return worst;
}

// --- Partitions ----------------------------------------------------------------------

Partition::Partition(std::vector<int> block_of) {
    std::vector<int> renumber;
    block_of_.reserve(block_of.size());
    for (int b : block_of) {
        if (b < 0)
            throw ValidationError("negative block index");
        if (static_cast<std::size_t>(b) >= renumber.size())
            renumber.resize(static_cast<std::size_t>(b) + 1, -1);
        auto& r = renumber[static_cast<std::size_t>(b)];
        if (r < 0)
            r = static_cast<int>(block_count_++);
        block_of_.push_back(r);
    }
}

Partition Partition::identity(std::size_t n_atoms) {
    std::vector<int> b(n_atoms);
    std::iota(b.begin(), b.end(), 0);
    return Partition(std::move(b));
}

Partition Partition::trivial(std::size_t n_atoms) { return Partition(std::vector<int>(n_atoms, 0)); }

Partition Partition::intervals(std::size_t n_atoms, std::size_t blocks) {
    if (blocks == 0 || blocks > n_atoms)
        throw ValidationError("interval partition needs 1 <= blocks <= atoms");
    std::vector<int> b(n_atoms);
    for (std::size_t i = 0; i < n_atoms; ++i)
        b[i] = static_cast<int>(i * blocks / n_atoms);
    return Partition(std::move(b));
}

std::vector<std::vector<int>> Partition::members() const {
    std::vector<std::vector<int>> out(block_count_);
    for (std::size_t i = 0; i < block_of_.size(); ++i)
        out[static_cast<std::size_t>(block_of_[i])].push_back(static_cast<int>(i));
    return out;
}

bool Partition::refines(const Partition& coarser) const {
    if (coarser.atom_count() != atom_count())
        return false;
    std::vector<int> image(block_count_, -1);
    for (std::size_t i = 0; i < block_of_.size(); ++i) {
        auto& img = image[static_cast<std::size_t>(block_of_[i])];
        if (img < 0)
            img = coarser.block_of(i);
        else if (img != coarser.block_of(i))
            return false;
    }
    return true;
}

RefinementSequence::RefinementSequence(std::vector<Partition> levels) : levels_(std::move(levels)) {
    for (std::size_t i = 1; i < levels_.size(); ++i)
        if (!levels_[i].refines(levels_[i - 1]))
            throw ValidationError("refinement level " + std::to_string(i) + " does not refine its predecessor");
}

RefinementSequence RefinementSequence::dyadic(std::size_t n_atoms, int levels) {
    if (levels < 1 || n_atoms % (std::size_t{1} << levels) != 0)
        throw ValidationError("dyadic refinement needs atoms divisible by 2^levels");
    std::vector<Partition> out;
    for (int m = 1; m <= levels; ++m)
        out.push_back(Partition::intervals(n_atoms, std::size_t{1} << m));
    return RefinementSequence(std::move(out));
}

namespace {

// Q[a][b] = eta(A x B), reduced with row axpy so the long inner loop is contiguous.
template <class T>
SquareMatrix<T> block_masses(const MarkovSpace<T>& s, const Partition& p) {
    const std::size_t n = s.size();
    const std::size_t k = p.block_count();
    SquareMatrix<T> col_reduced(n, T(0));
    std::vector<T> reduced_rows(n * k, T(0));
    for (std::size_t x = 0; x < n; ++x) {
        const auto row = s.eta().row(x);
        T* out = reduced_rows.data() + x * k;
        for (std::size_t y = 0; y < n; ++y)
            out[static_cast<std::size_t>(p.block_of(y))] += row[y];
    }
    SquareMatrix<T> q(k, T(0));
    for (std::size_t x = 0; x < n; ++x) {
        const std::span<const T> src(reduced_rows.data() + x * k, k);
        kernels::axpy(T(1), src, q.row(static_cast<std::size_t>(p.block_of(x))));
    }
    return q;
}

template <class T>
std::vector<T> block_pi(const MarkovSpace<T>& s, const Partition& p) {
    std::vector<T> out(p.block_count(), T(0));
    for (std::size_t x = 0; x < s.size(); ++x)
        out[static_cast<std::size_t>(p.block_of(x))] += s.pi()[x];
    return out;
}

} // namespace

template <class T>
MarkovSpace<T> project(const MarkovSpace<T>& s, const Partition& p) {
    if (p.atom_count() != s.size())
        throw ValidationError("partition has " + std::to_string(p.atom_count()) + " atoms, space has " +
                              std::to_string(s.size()));
    const std::size_t n = s.size();
    const auto q = block_masses(s, p);
    const auto bpi = block_pi(s, p);
    // eta'(x, y) = Q[a][b] * (pi_x / pi_a) * (pi_y / pi_b)
    std::vector<T> share(n);
    for (std::size_t x = 0; x < n; ++x)
        share[x] = s.pi()[x] / bpi[static_cast<std::size_t>(p.block_of(x))];
    SquareMatrix<T> eta(n);
    for (std::size_t x = 0; x < n; ++x) {
        const auto a = static_cast<std::size_t>(p.block_of(x));
        for (std::size_t y = 0; y < n; ++y)
            eta(x, y) = q(a, static_cast<std::size_t>(p.block_of(y))) * share[x] * share[y];
    }
    if constexpr (is_exact_v<T>) {
        return MarkovSpace<T>::from_matrix(std::move(eta), false);
    } else {
        // Renormalize away accumulated rounding; the change is O(1e-16).
        return MarkovSpace<T>::from_matrix(std::move(eta), true);
    }
}

template <class T>
MarkovSpace<T> quotient(const MarkovSpace<T>& s, const Partition& p) {
    if (p.atom_count() != s.size())
        throw ValidationError("partition size mismatch");
    return MarkovSpace<T>::from_matrix(block_masses(s, p), !is_exact_v<T>);
}

template <class T>
MarkovSpace<T> product_space(const MarkovSpace<T>& a, const MarkovSpace<T>& b) {
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    SquareMatrix<T> eta(na * nb);
    for (std::size_t x1 = 0; x1 < na; ++x1)
        for (std::size_t x2 = 0; x2 < nb; ++x2)
            for (std::size_t y1 = 0; y1 < na; ++y1)
                for (std::size_t y2 = 0; y2 < nb; ++y2)
                    eta(x1 * nb + x2, y1 * nb + y2) = a.eta()(x1, y1) * b.eta()(x2, y2);
    return MarkovSpace<T>::from_matrix(std::move(eta), !is_exact_v<T>);
}

template <class T>
T adjacency_form(const MarkovSpace<T>& s, std::span<const T> f, std::span<const T> g) {
    if (f.size() != s.size() || g.size() != s.size())
        throw ValidationError("adjacency form: vector length does not match atom count");
    T acc = 0;
    for (std::size_t x = 0; x < s.size(); ++x) {
        if (f[x] == 0)
            continue;
        acc += f[x] * kernels::dot(std::span<const T>(s.eta().row(x)), g);
    }
    return acc;
}

template <class T>
MarkovSpace<T> graph_space(int vertex_count, std::span<const std::pair<int, int>> edges) {
    SquareMatrix<T> m(static_cast<std::size_t>(vertex_count), T(0));
    for (const auto& [u, v] : edges) {
        m(static_cast<std::size_t>(u), static_cast<std::size_t>(v)) = 1;
        m(static_cast<std::size_t>(v), static_cast<std::size_t>(u)) = 1;
    }
    return MarkovSpace<T>::from_matrix(std::move(m), true);
}

FloatSpace to_float(const ExactSpace& s) {
    SquareMatrix<double> m(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            m(i, j) = s.eta()(i, j).get_d();
    return FloatSpace::from_matrix(std::move(m), true);
}

FloatSpace random_space(std::size_t n, std::mt19937_64& rng, double zero_fraction) {
    std::uniform_real_distribution<double> weight(0.0, 1.0);
    std::bernoulli_distribution drop(zero_fraction);
    SquareMatrix<double> m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double w = 1.0 - weight(rng); // (0, 1]
            const double v = (i != j && drop(rng)) ? 0.0 : w;
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            row += m(i, j);
        if (row == 0.0)
            m(i, i) = 1.0;
    }
    return FloatSpace::from_matrix(std::move(m), true);
}

ExactSpace random_exact_space(std::size_t n, std::mt19937_64& rng, int max_weight) {
    std::uniform_int_distribution<int> weight(0, max_weight);
    SquareMatrix<Rational> m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const Rational v(weight(rng));
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        Rational row = 0;
        for (std::size_t j = 0; j < n; ++j)
            row += m(i, j);
        if (row == 0)
            m(i, i) = 1;
    }
    return ExactSpace::from_matrix(std::move(m), true);
}

Partition random_partition(std::size_t n, std::size_t max_blocks, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, std::max<std::size_t>(max_blocks, 1) - 1);
    std::vector<int> b(n);
    for (auto& v : b)
        v = static_cast<int>(pick(rng));
    return Partition(std::move(b));
}

Partition random_coarsening(const Partition& p, std::mt19937_64& rng) {
    const auto merged = random_partition(p.block_count(), std::max<std::size_t>(1, p.block_count() / 2), rng);
    std::vector<int> b(p.atom_count());
    for (std::size_t i = 0; i < b.size(); ++i)
        b[i] = merged.block_of(static_cast<std::size_t>(p.block_of(i)));
    return Partition(std::move(b));
}

#define XLAB_INSTANTIATE(T)                                                                              \
    template class SquareMatrix<T>;                                                                      \
    template class MarkovSpace<T>;                                                                       \
    template StepGraphon<T> step_graphon(const MarkovSpace<T>&);                                         \
    template double regularity_defect(const StepGraphon<T>&);                                            \
    template MarkovSpace<T> project(const MarkovSpace<T>&, const Partition&);                            \
    template MarkovSpace<T> quotient(const MarkovSpace<T>&, const Partition&);                           \
    template MarkovSpace<T> product_space(const MarkovSpace<T>&, const MarkovSpace<T>&);                 \
    template T adjacency_form(const MarkovSpace<T>&, std::span<const T>, std::span<const T>);            \
    template MarkovSpace<T> graph_space(int, std::span<const std::pair<int, int>>);

XLAB_INSTANTIATE(double)
XLAB_INSTANTIATE(Rational)

#undef XLAB_INSTANTIATE

} // namespace xlab
