// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SSFLAB_SHIFT_HPP
#define SSFLAB_SHIFT_HPP

#include <string>

#include "ssflab/frechet.hpp"
#include "ssflab/pcf.hpp"

namespace ssflab {

/// A Hermitian pair (H0, H0 + V). H is always constructed from H0 and V, so
/// H - H0 - V vanishes identically.
class PerturbationPair {
 public:
  PerturbationPair(SelfAdjointOperator h0, SelfAdjointOperator v);

  const SelfAdjointOperator& h0() const { return h0_; }
  const SelfAdjointOperator& v() const { return v_; }
  const SelfAdjointOperator& h() const { return h_; }
  double hs_norm_v() const { return hs_norm_v_; }
  int dim() const { return h0_.dim(); }

 private:
  SelfAdjointOperator h0_;
  SelfAdjointOperator v_;
  SelfAdjointOperator h_;
  double hs_norm_v_;
};

struct ReportMeta {
  std::string function_desc;
  int s_nodes = 0;
  int dim = 0;
  std::string notes;
};

/// Two sides of a trace identity with their absolute and relative gap;
/// rel_err = abs_err / max(|lhs|, |rhs|, 1e-300).
struct VerificationReport {
  Complex lhs{0.0, 0.0};
  Complex rhs{0.0, 0.0};
  double abs_err = 0.0;
  double rel_err = 0.0;
  ReportMeta metadata;
};

VerificationReport make_report(Complex lhs, Complex rhs, ReportMeta meta);

/// The second-order spectral shift function
///   eta(lambda) = int_0^1 Tr{V [E_0(lambda) - E_s(lambda)]} ds
/// with the s integral discretized by an s_nodes-point Gauss-Legendre rule.
/// Each s slice is an exact step function with jumps at the eigenvalues of
/// H0 and H_s; the result is their weighted sum on the union grid, supported
/// on [min sigma(H0) - ||V||, max sigma(H0) + ||V||] (operator norm).
///
/// At every order K >= 1 the staircase satisfies the exact norm identity
/// integral(eta) = 1/2 ||V||_2^2, because each slice integrates to
/// s Tr(V^2) and the rule integrates linear functions of s exactly.
PiecewiseConstantFunction koplienko_eta(const PerturbationPair& pair,
                                        int s_nodes);

/// First-order (Krein) shift function: the eigenvalue counting difference
/// xi(lambda) = #{eig(H0) <= lambda} - #{eig(H) <= lambda}.
PiecewiseConstantFunction krein_xi(const PerturbationPair& pair);

/// Tr{p(H) - p(H0) - Dp(H0).V} against int p''(lambda) eta(lambda) dlambda.
VerificationReport verify_polynomial_formula(const PerturbationPair& pair,
                                             const FunctionSpec& p,
                                             int s_nodes);

/// Tr{e^{itH} - e^{itH0} - D(e^{itH0}).V} against
/// (it)^2 int e^{it lambda} eta(lambda) dlambda.
VerificationReport verify_exponential_formula(const PerturbationPair& pair,
                                              double t, int s_nodes);

/// Tr{f(H) - f(H0) - Df(H0).V} against the Fourier-side sum
/// sum_j w_j fhat(t_j) (it_j)^2 int e^{i t_j lambda} eta d lambda, which under
/// the synthesis convention equals int f'' eta.
VerificationReport verify_schwartz_formula(const PerturbationPair& pair,
                                           const FunctionSpec& f, int s_nodes);

struct EtaCheck {
  double min_value = 0.0;
  bool support_ok = false;
};

/// Minimum cell value of eta and whether it vanishes outside
/// [min sigma(H0) - ||V||, max sigma(H0) + ||V||].
EtaCheck eta_positivity_and_support(const PiecewiseConstantFunction& eta,
                                    const PerturbationPair& pair);

/// Operator norm of a Hermitian operator via its spectrum.
double hermitian_op_norm(const SelfAdjointOperator& a);

}  // namespace ssflab

#endif  // SSFLAB_SHIFT_HPP
