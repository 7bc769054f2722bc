#pragma once

// Independent reference computations used to generate expected values.

#include "xlab/graph.hpp"
#include "xlab/rational.hpp"

namespace xlab::oracle {

/// lambda_k by x = e^(2-u) over all of (0, 1], integrated panel by panel
/// between consecutive zeros of cos(k pi e^(2-u)) with 24-point Gauss-Legendre.
double convolution_eigenvalue(int k);

/// 1 + mu^4 where mu = integral of (2x-1)^2 over [0, 1] is the nonconstant
/// eigenvalue of W = 1 + (2x-1)(2y-1).
double bilinear_c4_limit();

/// Density of a connected pattern with a vertices and b edges in the
/// K-block truncation: sum_{k<=K} 2^(k(b-a)) + 2^(K(b-a)).
Rational noncompact_block_sum(int K, int a, int b);

/// t(K_2, K_2 x ... x K_i) as the product of j(j-1)/j^2.
Rational complete_product_edge_density(int i);

/// t*(C_k, K_n) from chi_{C_k}(q) = (q-1)^k + (-1)^k (q-1).
Rational cycle_complete_normalized(int k, int n);

} // namespace xlab::oracle
