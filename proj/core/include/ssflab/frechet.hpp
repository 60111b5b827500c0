// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SSFLAB_FRECHET_HPP
#define SSFLAB_FRECHET_HPP

#include <vector>

#include "ssflab/linalg.hpp"

namespace ssflab {

/// Directional (Frechet) derivative of a matrix function at a base point.
struct DirectionalDerivative {
  enum class Method { power_sum, doi, duhamel_quadrature };

  Matrix matrix;
  Method method = Method::power_sum;
  int quadrature_nodes = 0;  // 0 when the method is exact
};

/// Dp(H0).V for a polynomial p: the power sum
/// sum_r c_r sum_{j=0}^{r-1} H0^{r-1-j} V H0^j.
DirectionalDerivative frechet_poly(const SelfAdjointOperator& h0,
                                   const SelfAdjointOperator& v,
                                   const FunctionSpec& p);

struct PathDerivativeCheck {
  Matrix analytic;
  Matrix finite_diff;
  double err;
};

/// Compares the analytic derivative of s -> p(H0 + sV) at s against a
/// central finite difference with step h. Requires 0 <= s <= 1 and
/// 0 < h <= 1e-4. The finite difference uses Horner matrix evaluation, an
/// independent route from the power sum.
PathDerivativeCheck path_derivative_check(const SelfAdjointOperator& h0,
                                          const SelfAdjointOperator& v,
                                          const FunctionSpec& p, double s,
                                          double h);

/// Double-operator-integral action of the divided-difference kernel:
/// U * (K o (U* X W)) * W* with K_ij = [f(alpha_i) - f(beta_j)] /
/// (alpha_i - beta_j), confluent entries replaced by f'. alpha, beta are the
/// eigenvalues of da and db; o is the entrywise product.
Matrix doi_divided_difference(const SpectralDecomposition& da,
                              const SpectralDecomposition& db,
                              const FunctionSpec& f, const Matrix& x);

/// Confluence threshold used by the DOI kernel for a given spectral range.
double doi_confluence_threshold(double spectral_range);

/// D(exp(itH0)).V, either exactly through the DOI kernel or by Gauss-Legendre
/// discretization of the Duhamel integral it int_0^1 e^{it a H0} V
/// e^{it(1-a) H0} da.
DirectionalDerivative frechet_exp(const SelfAdjointOperator& h0,
                                  const SelfAdjointOperator& v, double t,
                                  DirectionalDerivative::Method method =
                                      DirectionalDerivative::Method::doi,
                                  int nodes = 32);

/// exp(itH) - exp(itH0) - D(exp(itH0)).V for H = H0 + V (checked to 1e-12).
Matrix second_order_remainder_exp(const SelfAdjointOperator& h,
                                  const SelfAdjointOperator& h0,
                                  const SelfAdjointOperator& v, double t);

/// Df(H0).V for a schwartz synthesis f: the weighted sum over Fourier
/// samples of the exact exponential derivative at each frequency.
DirectionalDerivative frechet_schwartz(const SelfAdjointOperator& h0,
                                       const SelfAdjointOperator& v,
                                       const FunctionSpec& f);

/// Tr{p(H) - p(H0) - Dp(H0).V} for each polynomial, through the exact
/// second-order expansion
///   sum_r c_r sum_{j=0}^{r-2} sum_{k=0}^{r-j-2} Tr{H^{r-j-k-2} V H0^k V H0^j}
/// which is free of the cancellation the direct difference suffers and is
/// identically zero for degrees 0 and 1. Powers are shared across the batch.
std::vector<Complex> second_order_poly_remainder_traces(
    const SelfAdjointOperator& h, const SelfAdjointOperator& h0,
    const SelfAdjointOperator& v, const std::vector<FunctionSpec>& polys);

Complex second_order_poly_remainder_trace(const SelfAdjointOperator& h,
                                          const SelfAdjointOperator& h0,
                                          const SelfAdjointOperator& v,
                                          const FunctionSpec& p);

}  // namespace ssflab

#endif  // SSFLAB_FRECHET_HPP
