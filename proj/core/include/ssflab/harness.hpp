// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SSFLAB_HARNESS_HPP
#define SSFLAB_HARNESS_HPP

#include "ssflab/scenario.hpp"
#include "ssflab/wvn.hpp"

namespace ssflab {

/// One measured quantity at one schedule step. For compressed-trace rows lhs
/// is the full-space trace, rhs the compressed trace and value their gap;
/// for bound rows lhs is the measured quantity, rhs the bound it must stay
/// under, and value equals lhs.
struct ConvergenceRow {
  int step_index = 0;
  double epsilon = 0.0;
  int rank = 0;
  std::string quantity;
  Complex lhs{0.0, 0.0};
  Complex rhs{0.0, 0.0};
  double value = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::string provenance;  // scenario hash
};

/// Builds the seeded pair described by the scenario. Streams for H0 and V
/// are decorrelated; identical scenarios give bit-identical pairs.
PerturbationPair build_pair(const Scenario& sc);
SelfAdjointOperator build_h0(const Scenario& sc, int dim);
SelfAdjointOperator build_v(const Scenario& sc, int dim);

/// Projection for schedule step (slice_counts override, else the
/// guarantee-driven count saturated by n_cap).
ProjectionBasis scheduled_projection(const Scenario& sc,
                                     const PerturbationPair& pair,
                                     std::size_t step);

/// Compressed-trace convergence for each scenario polynomial over the
/// epsilon schedule: the gap between Tr{p(H)-p(H0)-Dp(H0).V} and its
/// compression onto range(P_n).
ConvergenceTable run_polynomial_convergence(const Scenario& sc);

/// Same for exp(it .) at each t value, plus a max-over-t row per step as the
/// uniformity proxy.
ConvergenceTable run_exponential_convergence(const Scenario& sc);

/// L1 gaps of consecutive compressed shift functions eta_n, each computed
/// intrinsically on range(P_n), against the constructive Cauchy bound
/// ||V||_2 [2(||Pn'H0Pn|| + ||Pm'H0Pm||) + (||Pn'VPn|| + ||Pm'VPm||)/2 +
/// ||Vn - Vm||/2] evaluated from measured norms. Also reports the norm
/// identity ||eta_n||_1 = ||P_n V P_n||_2^2 / 2 at every step.
ConvergenceTable run_eta_cauchy(const Scenario& sc);

/// Unbounded emulation: a diagonal H0 with growing eigenvalues at a ladder
/// of ambient dimensions. Verifies the exponential and schwartz trace
/// formulas per dimension and reports the Hilbert-Schmidt tail of V beyond
/// each truncation.
ConvergenceTable run_unbounded_demo(const Scenario& sc);

}  // namespace ssflab

#endif  // SSFLAB_HARNESS_HPP
