#pragma once

// Built-in analytic graphons and their discretization into finite spaces.
//
//   constant           W = 1                      params: atoms
//   bilinear           W = 1 + (2x-1)(2y-1)       params: atoms
//   noncompact-blocks  W = 2^k on I_k x I_k       params: K
//   lp-blocks          W = 1/a_m on diagonal blocks, a_m ~ m^(-2/(1-eps))
//                                                 params: eps, blocks
//   convolution-log    W(x, y) = f(x - y) on [-1, 1], f(x) = 1/(|x|(2 - ln|x|)^2)
//                      extended with period 2     params: atoms

#include "xlab/space.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace xlab {

struct GraphonSpec {
    std::string name;
    std::map<std::string, double> params;

    double param(const std::string& key) const;
    double param(const std::string& key, double fallback) const;
};

/// Names accepted by discretize_graphon, in catalog order.
const std::vector<std::string>& graphon_names();

/// Cell-averaged discretization, normalized to total mass 1. Exact mode is
/// available for constant, bilinear and noncompact-blocks.
template <class T>
MarkovSpace<T> discretize_graphon(const GraphonSpec& spec);

/// 32-point tensor Gauss-Legendre cell averages of an arbitrary symmetric
/// kernel on [0, 1]^2 split into `atoms` equal intervals.
FloatSpace discretize_kernel(const std::function<double(double, double)>& w, std::size_t atoms);

/// Antiderivative F(t) of the periodic convolution-log profile, F(0) = 0.
double convolution_log_antiderivative(double t);

} // namespace xlab
