// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SSFLAB_PCF_HPP
#define SSFLAB_PCF_HPP

#include <vector>

#include "ssflab/function_spec.hpp"

namespace ssflab {

/// A jump event: the function increases by delta at position (values live on
/// half-open cells [b_k, b_{k+1}), so the jump takes effect at position).
struct Jump {
  double position;
  double delta;
};

/// Compactly supported real step function. Cell k carries the value on
/// [breakpoints[k], breakpoints[k+1]); the function is zero outside
/// [breakpoints.front(), breakpoints.back()] and the support interval
/// contains that range. Immutable after construction.
class PiecewiseConstantFunction {
 public:
  /// Zero function with the given support.
  static PiecewiseConstantFunction zero(double support_lo, double support_hi);

  /// Accumulates jump events into cells. Events at equal positions merge;
  /// the cumulative value after the last event should return to zero and any
  /// round-off residue is dropped with the final cell. The support interval
  /// is widened to cover all breakpoints, and explicit zero cells pad the
  /// function out to the support endpoints.
  static PiecewiseConstantFunction from_jumps(std::vector<Jump> jumps,
                                              double support_lo,
                                              double support_hi);

  static PiecewiseConstantFunction from_cells(std::vector<double> breakpoints,
                                              std::vector<double> values,
                                              double support_lo,
                                              double support_hi);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  double support_lo() const { return support_lo_; }
  double support_hi() const { return support_hi_; }
  std::size_t cell_count() const { return values_.size(); }

  double value_at(double lambda) const;
  double integral() const;
  double l1_norm() const;
  double min_value() const;
  double max_abs_value() const;

  /// sum_i coeff_i * f_i on the merged breakpoint grid, in the given order.
  static PiecewiseConstantFunction linear_combination(
      const std::vector<std::pair<double, const PiecewiseConstantFunction*>>&
          terms);

 private:
  PiecewiseConstantFunction() = default;

  std::vector<double> breakpoints_;  // size m+1, strictly increasing
  std::vector<double> values_;       // size m
  double support_lo_ = 0.0;
  double support_hi_ = 0.0;
};

/// Exact integral of f against the weight w: per-cell evaluation of the
/// closed-form antiderivative, so there is no lambda-grid error. Throws
/// UnsupportedWeightError for weights without an antiderivative.
Complex integrate_pcf(const PiecewiseConstantFunction& f,
                      const FunctionSpec& w);

/// Exact L1 distance between two step functions on the merged grid.
double l1_distance(const PiecewiseConstantFunction& a,
                   const PiecewiseConstantFunction& b);

}  // namespace ssflab

#endif  // SSFLAB_PCF_HPP
