#include "xlab/sphere.hpp"

#include "xlab/errors.hpp"

#include <cmath>

namespace xlab {

SphereSpace::SphereSpace(int dim, double tol) : d(dim), tolerance(tol) {
    if (dim < 2)
        throw ValidationError("sphere dimension must be at least 2");
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return std::mt19937_64(mix(mix(seed) ^ index));
}

double inner(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += a[i] * b[i];
    return acc;
}

namespace {

// Two modified Gram-Schmidt passes of v against the orthonormal basis.
void project_out(Vec& v, const std::vector<Vec>& basis) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : basis) {
            const double c = inner(v, q);
            for (std::size_t i = 0; i < v.size(); ++i)
                v[i] -= c * q[i];
        }
    }
}

double norm(const Vec& v) { return std::sqrt(inner(v, v)); }

} // namespace

std::optional<Vec> sphere_conditional_sample(int d, std::span<const Vec> anchors, std::mt19937_64& rng) {
    SphereSpace space(d);
    std::vector<Vec> basis;
    for (const auto& a : anchors) {
        if (static_cast<int>(a.size()) != d)
            throw ValidationError("anchor dimension does not match the sphere");
        if (std::abs(norm(a) - 1.0) > 1e-9)
            throw ValidationError("anchor is not a unit vector");
        Vec q = a;
        project_out(q, basis);
        const double r = norm(q);
        if (r > space.tolerance) {
            for (auto& x : q)
                x /= r;
            basis.push_back(std::move(q));
        }
    }
    if (static_cast<int>(basis.size()) >= d)
        return std::nullopt;

    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(static_cast<std::size_t>(d));
    for (;;) {
        for (auto& x : v)
            x = gauss(rng);
        project_out(v, basis);
        const double r = norm(v);
        if (r >= 1e-12) {
            for (auto& x : v)
                x /= r;
            return v;
        }
    }
}

} // namespace xlab
