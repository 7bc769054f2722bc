#pragma once

// One-dimensional quadrature: adaptive Gauss-Kronrod (7/15) with global
// interval bisection, and fixed-order Gauss-Legendre rules.

#include <functional>
#include <vector>

namespace xlab::quad {

struct Result {
    double value = 0.0;
    double error = 0.0; // sum of |K15 - G7| over the final intervals
    int intervals = 0;
    bool converged = false;
};

/// Integrates f over [a, b] until the error estimate drops below
/// max(abs_tol, rel_tol * |value|) or `max_intervals` is reached.
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     double rel_tol = 0.0, int max_intervals = 2000);

struct Rule {
    std::vector<double> nodes;   // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n).
const Rule& gauss_legendre_rule(int n);

/// Fixed n-point Gauss-Legendre estimate of the integral of f over [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int n = 32);

} // namespace xlab::quad
