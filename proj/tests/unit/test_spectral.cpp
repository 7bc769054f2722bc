#include "test_support.hpp"
#include "xlab/density.hpp"
#include "xlab/errors.hpp"
#include "xlab/graphon.hpp"
#include "xlab/oracles.hpp"
#include "xlab/quadrature.hpp"
#include "xlab/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace xlab;

namespace {

template <class T>
MarkovSpace<T> k_space(int n) {
    const Graph k = complete_graph(n);
    return graph_space<T>(n, k.edges());
}

void check_values(const std::vector<double>& got, const std::vector<double>& want, double tol) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(std::abs(got[i] - want[i]) <= tol);
}

} // namespace

TEST_CASE("spectrum examples") {
    check_values(spectrum(k_space<double>(2)).values, {1.0, -1.0}, 1e-12);
    check_values(spectrum(k_space<Rational>(3)).values, {1.0, -0.5, -0.5}, 1e-12);
    check_values(spectrum(testing::integer_space({{1}})).values, {1.0}, 1e-15);
}

TEST_CASE("Jacobi agrees with power iteration and reconstructs the matrix") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n : {2u, 3u, 5u, 6u}) {
        SquareMatrix<double> a(n);
        std::vector<std::vector<double>> rows(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                rows[i][j] = rows[j][i] = a(i, j) = a(j, i) = u(rng);
        const auto r = jacobi_eigen(a);
        check_values(testing::sorted_desc(r.values), testing::power_iteration_eigenvalues(rows), 1e-6);
    }
    for (std::size_t n : {1u, 7u, 24u, 64u}) {
        SquareMatrix<double> a(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                a(i, j) = a(j, i) = u(rng);
        const auto r = jacobi_eigen(a);
        double frob = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double rec = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    rec += r.values[k] * r.vectors(k, i) * r.vectors(k, j);
                frob += (rec - a(i, j)) * (rec - a(i, j));
            }
        CHECK(std::sqrt(frob) <= 1e-10);
        CHECK(r.off_norm <= 1e-10);
    }
}

TEST_CASE("spectral and combinatorial cycle densities agree") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 20; ++t) {
        const auto s = random_space(1 + rng() % 24, rng, 0.3);
        const auto sp = spectrum(s);
        CHECK(std::abs(sp.values.front() - 1.0) <= 1e-9);
        CHECK(sp.residual <= 1e-8);
        for (int k = 3; k <= 8; ++k)
            CHECK(std::abs(power_sum(sp.values, k) - density(cycle_graph(k), s)) <= 1e-9);
    }
}

TEST_CASE("cycle density spectral examples") {
    CHECK(cycle_density_spectral(k_space<double>(2), 4) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(cycle_density_spectral(k_space<double>(2), 3)) <= 1e-12);
    CHECK(cycle_density_spectral(k_space<double>(3), 3) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(cycle_density_spectral(testing::integer_space({{1}}), 7) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("Schatten norms") {
    CHECK(schatten_norm(k_space<double>(2), 4) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-13));
    CHECK(schatten_norm(k_space<double>(2), 4) == doctest::Approx(kp_norm(k_space<double>(2), 2, 2)).epsilon(1e-13));
    std::mt19937_64 rng(1);
    const auto s = random_space(12, rng, 0.2);
    CHECK(schatten_norm(s, 64) == doctest::Approx(1.0).epsilon(0.1));
    for (double p : {1.0, 2.0, 5.0})
        CHECK(schatten_norm(testing::integer_space({{1}}), p) == doctest::Approx(1.0));
}

TEST_CASE("product spectrum is the outer product of factor spectra") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 5; ++t) {
        const auto a = random_space(2 + rng() % 5, rng);
        const auto b = random_space(2 + rng() % 5, rng);
        std::vector<double> outer;
        for (double x : spectrum(a).values)
            for (double y : spectrum(b).values)
                outer.push_back(x * y);
        check_values(spectrum(product_space(a, b)).values, testing::sorted_desc(outer), 1e-9);
    }
}

TEST_CASE("projected spectra interlace and contract") {
    std::mt19937_64 rng(4);
    std::size_t n = 6;
    const auto s = random_space(n, rng, 0.1);
    const auto flat = projected_spectrum_check(s, Partition::trivial(n));
    CHECK(flat.projected.values.front() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 1; i < flat.projected.values.size(); ++i)
        CHECK(std::abs(flat.projected.values[i]) <= 1e-12);
    const auto same = projected_spectrum_check(s, Partition::identity(n));
    check_values(same.projected.values, same.full.values, 1e-12);

    for (int t = 0; t < 30; ++t) {
        n = 2 + rng() % 31;
        const auto r = random_space(n, rng, 0.3);
        const auto rep = projected_spectrum_check(r, random_partition(n, 1 + rng() % n, rng));
        CHECK(rep.interlacing_ok);
        CHECK(rep.schatten_contraction_ok);
        // independent check of the positive-side interlacing
        for (int k = 1; k <= 3; ++k)
            CHECK(signed_eigenvalue(rep.projected.values, k, 1) <= signed_eigenvalue(rep.full.values, k, 1) + 1e-10);
    }
}

TEST_CASE("signed eigenvalues") {
    const std::vector<double> v{1.0, 0.4, 0.0, -0.2, -0.7};
    CHECK(signed_eigenvalue(v, 1, 1) == 1.0);
    CHECK(signed_eigenvalue(v, 2, 1) == 0.4);
    CHECK(signed_eigenvalue(v, 3, 1) == 0.0);
    CHECK(signed_eigenvalue(v, 1, -1) == -0.7);
    CHECK(signed_eigenvalue(v, 2, -1) == -0.2);
    CHECK(signed_eigenvalue(v, 9, -1) == 0.0);
}

TEST_CASE("quadrature rules") {
    CHECK(quad::gauss_legendre([](double x) { return std::pow(x, 9); }, 0.0, 1.0, 5) ==
          doctest::Approx(0.1).epsilon(1e-14));
    const auto r = quad::gauss_kronrod([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-11);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
    const auto osc = quad::gauss_kronrod([](double x) { return std::cos(40.0 * x); }, 0.0, 1.0, 1e-13);
    CHECK(osc.value == doctest::Approx(std::sin(40.0) / 40.0).epsilon(1e-11));
}

TEST_CASE("convolution eigenvalues") {
    CHECK(std::abs(convolution_eigenvalue(0) - 0.5) <= 1e-8);
    for (int k : {1, 2, 5, 17, 64, 255, 1000, 4096})
        CHECK(std::abs(convolution_eigenvalue(k) - oracle::convolution_eigenvalue(k)) <= 1e-9);
    for (int k = 0; k <= 256; ++k)
        CHECK(convolution_eigenvalue(k) >= -1e-8);
    for (int k = 32; k <= 256; ++k)
        CHECK(convolution_eigenvalue(k) / convolution_lower_bound(k) >= 1.0);
    CHECK(std::isnan(convolution_lower_bound(0)));
    CHECK(convolution_lower_bound(8) == doctest::Approx(1.0 / (4.0 * std::sqrt(2.0) * (2.0 + std::log(32.0)))));
    CHECK(convolution_profile(0.5) == doctest::Approx(1.0 / (0.5 * std::pow(2.0 + std::log(2.0), 2))));
    CHECK_THROWS_AS(convolution_eigenvalue(-1), Error);
}

TEST_CASE("convolution eigenvalues match the discretized kernel") {
    const auto s = discretize_graphon<double>({"convolution-log", {{"atoms", 256}}});
    const auto sp = spectrum(s);
    CHECK(sp.values.front() == doctest::Approx(1.0).epsilon(1e-9));
    // normalized to top eigenvalue 1, cos(k pi x) carries 2 lambda_k
    for (int k = 1; k <= 3; ++k) {
        const double want = 2.0 * convolution_eigenvalue(k);
        bool found = false;
        for (double v : sp.values)
            found = found || std::abs(v - want) <= 2e-3;
        CHECK(found);
    }
}

TEST_CASE("convolution report") {
    const auto rep = convolution_report(300, {2, 4});
    CHECK(rep.rows.size() == 301);
    CHECK(rep.rows[10].lambda == convolution_eigenvalue(10));
    CHECK(std::isnan(rep.rows[0].ratio));
    REQUIRE(rep.partial_sums.size() == 2);
    CHECK(rep.partial_sums[0].checkpoints == std::vector<int>{64, 256});
    double direct = 0.0;
    for (int k = 0; k <= 64; ++k)
        direct += std::pow(convolution_eigenvalue(k), 2);
    CHECK(rep.partial_sums[0].sums[0] == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("spectrum size limit") {
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(spectrum(random_space(4097, rng)), Error);
}
