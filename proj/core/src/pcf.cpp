// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ssflab/pcf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ssflab/errors.hpp"

namespace ssflab {

namespace {

// Neumaier compensated accumulation.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct ComplexKahan {
  KahanSum re, im;
  void add(Complex z) {
    re.add(z.real());
    im.add(z.imag());
  }
  Complex value() const { return {re.value(), im.value()}; }
};

}  // namespace

PiecewiseConstantFunction PiecewiseConstantFunction::zero(double support_lo,
                                                          double support_hi) {
  return from_jumps({}, support_lo, support_hi);
}

PiecewiseConstantFunction PiecewiseConstantFunction::from_jumps(
    std::vector<Jump> jumps, double support_lo, double support_hi) {
  if (!(support_lo <= support_hi))
    throw Error("pcf: support interval is inverted");
  std::stable_sort(jumps.begin(), jumps.end(),
                   [](const Jump& a, const Jump& b) {
                     return a.position < b.position;
                   });

  PiecewiseConstantFunction f;
  // Distinct positions, with same-position deltas merged.
  std::vector<double> pos;
  std::vector<double> delta;
  for (const Jump& j : jumps) {
    if (!std::isfinite(j.position) || !std::isfinite(j.delta))
      throw Error("pcf: non-finite jump");
    if (!pos.empty() && j.position == pos.back()) {
      delta.back() += j.delta;
    } else {
      pos.push_back(j.position);
      delta.push_back(j.delta);
    }
  }

  const double lo = pos.empty() ? support_lo : std::min(support_lo, pos.front());
  const double hi = pos.empty() ? support_hi : std::max(support_hi, pos.back());
  f.support_lo_ = lo;
  f.support_hi_ = hi;

  f.breakpoints_.clear();
  f.values_.clear();
  if (pos.empty()) {
    if (lo < hi) {
      f.breakpoints_ = {lo, hi};
      f.values_ = {0.0};
    } else {
      f.breakpoints_ = {lo};
    }
    return f;
  }

  if (lo < pos.front()) {
    f.breakpoints_.push_back(lo);
    f.values_.push_back(0.0);
  }
  KahanSum level;
  for (std::size_t k = 0; k < pos.size(); ++k) {
    level.add(delta[k]);
    f.breakpoints_.push_back(pos[k]);
    if (k + 1 < pos.size()) f.values_.push_back(level.value());
  }
  // The cumulative level after the final event is zero up to round-off; one
  // trailing cell pads the function out to the support endpoint.
  if (pos.back() < hi) {
    f.values_.push_back(0.0);
    f.breakpoints_.push_back(hi);
  }
  if (f.breakpoints_.size() == 1) {
    // Single event at the support point: degenerate but valid, one cell of
    // width zero is meaningless, so represent as the zero function there.
    f.breakpoints_ = {pos.front()};
    f.values_.clear();
  }
  return f;
}

PiecewiseConstantFunction PiecewiseConstantFunction::from_cells(
    std::vector<double> breakpoints, std::vector<double> values,
    double support_lo, double support_hi) {
  if (breakpoints.size() != values.size() + 1)
    throw Error("pcf: need one more breakpoint than values");
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k)
    if (!(breakpoints[k] < breakpoints[k + 1]))
      throw Error("pcf: breakpoints must be strictly increasing");
  for (double v : values)
    if (!std::isfinite(v)) throw Error("pcf: non-finite value");
  PiecewiseConstantFunction f;
  f.support_lo_ = std::min(support_lo, breakpoints.front());
  f.support_hi_ = std::max(support_hi, breakpoints.back());
  f.breakpoints_ = std::move(breakpoints);
  f.values_ = std::move(values);
  return f;
}

double PiecewiseConstantFunction::value_at(double lambda) const {
  if (values_.empty()) return 0.0;
  if (lambda < breakpoints_.front() || lambda >= breakpoints_.back())
    return 0.0;
  const auto it =
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), lambda);
  const std::size_t cell =
      static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return values_[std::min(cell, values_.size() - 1)];
}

double PiecewiseConstantFunction::integral() const {
  KahanSum acc;
  for (std::size_t k = 0; k < values_.size(); ++k)
    acc.add(values_[k] * (breakpoints_[k + 1] - breakpoints_[k]));
  return acc.value();
}

double PiecewiseConstantFunction::l1_norm() const {
  KahanSum acc;
  for (std::size_t k = 0; k < values_.size(); ++k)
    acc.add(std::abs(values_[k]) * (breakpoints_[k + 1] - breakpoints_[k]));
  return acc.value();
}

double PiecewiseConstantFunction::min_value() const {
  double m = 0.0;  // the function is zero outside its cells
  for (double v : values_) m = std::min(m, v);
  return m;
}

double PiecewiseConstantFunction::max_abs_value() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

PiecewiseConstantFunction PiecewiseConstantFunction::linear_combination(
    const std::vector<std::pair<double, const PiecewiseConstantFunction*>>&
        terms) {
  std::vector<double> grid;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& [c, f] : terms) {
    (void)c;
    grid.insert(grid.end(), f->breakpoints().begin(), f->breakpoints().end());
    lo = std::min(lo, f->support_lo());
    hi = std::max(hi, f->support_hi());
  }
  if (grid.empty()) return zero(0.0, 0.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<double> values(grid.size() - 1, 0.0);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double mid = grid[k] + 0.5 * (grid[k + 1] - grid[k]);
    KahanSum acc;
    for (const auto& [c, f] : terms) acc.add(c * f->value_at(mid));
    values[k] = acc.value();
  }
  return from_cells(std::move(grid), std::move(values), lo, hi);
}

Complex integrate_pcf(const PiecewiseConstantFunction& f,
                      const FunctionSpec& w) {
  if (!w.has_antiderivative())
    throw UnsupportedWeightError(
        "integrate_pcf: weight kind has no closed-form antiderivative");
  const auto& b = f.breakpoints();
  const auto& v = f.values();
  ComplexKahan acc;
  if (v.empty()) return acc.value();
  Complex w_right = w.antiderivative(b[0]);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Complex w_left = w_right;
    w_right = w.antiderivative(b[k + 1]);
    acc.add(v[k] * (w_right - w_left));
  }
  return acc.value();
}

double l1_distance(const PiecewiseConstantFunction& a,
                   const PiecewiseConstantFunction& b) {
  const auto diff = PiecewiseConstantFunction::linear_combination(
      {{1.0, &a}, {-1.0, &b}});
  return diff.l1_norm();
}

}  // namespace ssflab
