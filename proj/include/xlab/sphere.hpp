#pragma once

// Conditional sampling in the orthogonality space of S^{d-1}: the next point
// is uniform on the unit sphere of the orthogonal complement of its anchors.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace xlab {

using Vec = std::vector<double>;

struct SphereSpace {
    int d = 3;
    double tolerance = 1e-9;

    explicit SphereSpace(int dim, double tol = 1e-9);
};

/// Engine seeded from (seed, index) by splitmix64 so each sample's stream is
/// independent of evaluation order.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index);

/// Uniform point of the unit sphere orthogonal to every anchor, or nullopt
/// when the anchors span R^d. Anchors must be unit vectors (within 1e-9).
std::optional<Vec> sphere_conditional_sample(int d, std::span<const Vec> anchors, std::mt19937_64& rng);

double inner(std::span<const double> a, std::span<const double> b);

} // namespace xlab
