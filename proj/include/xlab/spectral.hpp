#pragma once

// Spectra of the symmetrized adjacency kernel S = eta / sqrt(pi x pi),
// cycle densities as power sums, Schatten norms, projection checks and the
// eigenvalues of the periodic convolution-log graphon.

#include "xlab/space.hpp"

#include <vector>

namespace xlab {

struct JacobiResult {
    std::vector<double> values;   // unsorted, matching the rows of `vectors`
    SquareMatrix<double> vectors; // row i is the unit eigenvector of values[i]
    int sweeps = 0;
    double off_norm = 0.0;        // off-diagonal Frobenius norm at exit
};

/// Cyclic Jacobi with row-major sweeps over the upper triangle. Stops when the
/// off-diagonal Frobenius norm is at most `tol`.
JacobiResult jacobi_eigen(SquareMatrix<double> a, double tol = 1e-14, int max_sweeps = 100);

struct Spectrum {
    std::vector<double> values; // descending
    double residual = 0.0;      // solver off-diagonal norm
};

inline constexpr std::size_t kMaxSpectrumAtoms = 4096;

SquareMatrix<double> symmetrized_kernel(const FloatSpace& s);

template <class T>
Spectrum spectrum(const MarkovSpace<T>& s);

/// sum_i lambda_i^k.
double power_sum(const std::vector<double>& eigenvalues, int k);
/// (sum_i |lambda_i|^p)^(1/p).
double schatten_norm(const std::vector<double>& eigenvalues, double p);

template <class T>
double cycle_density_spectral(const MarkovSpace<T>& s, int k);

template <class T>
double schatten_norm(const MarkovSpace<T>& s, double p);

struct ProjectionReport {
    Spectrum full;
    Spectrum projected;
    bool interlacing_ok = true;
    bool schatten_contraction_ok = true;
    double max_violation = 0.0; // largest amount by which any inequality fails (<= 0 when all hold)
};

inline constexpr double kSpectralTolerance = 1e-10;

template <class T>
ProjectionReport projected_spectrum_check(const MarkovSpace<T>& s, const Partition& p);

/// k-th largest positive (sign > 0) or k-th most negative (sign < 0)
/// eigenvalue, 1-based; 0 when fewer exist.
double signed_eigenvalue(const std::vector<double>& descending, int k, int sign);

// --- convolution-log graphon -------------------------------------------------------

/// f(x) = 1 / (x (2 - ln x)^2) on (0, 1].
double convolution_profile(double x);

/// lambda_k = integral over [0, 1] of f(x) cos(k pi x) dx, absolute error ~1e-9.
double convolution_eigenvalue(int k);

/// 1 / (4 sqrt(2) (2 + ln 4k)) for k >= 1.
double convolution_lower_bound(int k);

struct ConvolutionRow {
    int k = 0;
    double lambda = 0.0;
    double lower_bound = 0.0; // NaN at k = 0
    double ratio = 0.0;       // lambda / lower_bound, NaN at k = 0
};

struct PartialSums {
    int power = 0;
    std::vector<int> checkpoints;
    std::vector<double> sums;
    bool strictly_increasing = true; // each step grows by more than 1e-6
};

struct ConvolutionReport {
    std::vector<ConvolutionRow> rows;
    std::vector<PartialSums> partial_sums;
};

inline constexpr double kPlateauTolerance = 1e-6;

/// Rows for k = 0..k_max and partial sums at the checkpoints 64, 256, 1024,
/// 4096 that do not exceed k_max.
ConvolutionReport convolution_report(int k_max, const std::vector<int>& powers);

} // namespace xlab
