// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SSFLAB_QUADRATURE_HPP
#define SSFLAB_QUADRATURE_HPP

#include <vector>

namespace ssflab {

/// Nodes and weights of a quadrature rule, stored in ascending node order.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Legendre rule with n points on [-1, 1]. Exact for polynomials of
/// degree <= 2n-1. Nodes are computed by Newton iteration on P_n and are
/// deterministic for a given n.
QuadratureRule gauss_legendre(int n);

/// The same rule mapped to [0, 1].
QuadratureRule gauss_legendre_01(int n);

}  // namespace ssflab

#endif  // SSFLAB_QUADRATURE_HPP
