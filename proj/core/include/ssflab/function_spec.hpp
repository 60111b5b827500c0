// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SSFLAB_FUNCTION_SPEC_HPP
#define SSFLAB_FUNCTION_SPEC_HPP

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace ssflab {

using Complex = std::complex<double>;

/// One term of a finite Fourier synthesis f(lambda) ~ sum_j weight_j *
/// fhat_j * exp(i t_j lambda), a quadrature discretization of the integral
/// f(lambda) = int fhat(t) exp(i t lambda) dt.
struct FourierSample {
  double t = 0.0;
  Complex weight{0.0, 0.0};
  Complex fhat{0.0, 0.0};
};

/// Callable contract for a bounded-derivative test function g with
/// g(lambda) = int_0^lambda f(mu) dmu, so g' = f and |f| <= f_sup_norm.
struct BoundedTest {
  std::function<double(double)> g;
  std::function<double(double)> f;
  double f_sup_norm = 1.0;
  std::string name = "bounded_test";
};

/// Tagged description of a scalar function with exactly one payload.
///
/// polynomial  coefficients by ascending power
/// exponential exp(i t lambda) for a fixed real frequency t
/// schwartz    finite Fourier synthesis (see FourierSample)
/// bounded_test callable contract, used by convergence experiments
class FunctionSpec {
 public:
  enum class Kind { polynomial, exponential, schwartz, bounded_test };

  static FunctionSpec polynomial(std::vector<Complex> coeffs);
  static FunctionSpec polynomial_real(const std::vector<double>& coeffs);
  static FunctionSpec exponential(double t);
  static FunctionSpec schwartz(std::vector<FourierSample> samples,
                               std::string description = "schwartz");
  static FunctionSpec bounded_test(BoundedTest contract);

  /// Gaussian exp(-lambda^2 / (2 sigma^2)) as a schwartz synthesis on a
  /// symmetric trapezoid grid |t| <= t_max with the given point count. The
  /// transform is fhat(t) = sigma/sqrt(2 pi) * exp(-sigma^2 t^2 / 2); with
  /// the defaults its tail beyond t_max is far below 1e-12.
  static FunctionSpec gaussian(double sigma = 1.0, double t_max = 12.0,
                               int points = 256);

  Kind kind() const { return kind_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  double frequency() const { return t_; }
  const std::vector<FourierSample>& fourier_samples() const {
    return samples_;
  }
  const BoundedTest& bounded() const { return bounded_; }
  int degree() const;  // polynomial only

  Complex value(double lambda) const;
  Complex derivative(double lambda) const;

  /// [f(a) - f(b)] / (a - b) with the confluent value f'(a) when
  /// |a - b| <= confluence. Polynomial and exponential kinds use exact
  /// cancellation-free forms (homogeneous power sums, the sinc identity), so
  /// the threshold only matters for bounded_test payloads.
  Complex divided_difference(double a, double b, double confluence) const;

  /// Derivative as a new spec. Polynomials only.
  FunctionSpec differentiate() const;

  /// True when integrate_pcf supports this kind as a weight.
  bool has_antiderivative() const { return kind_ != Kind::bounded_test; }
  /// Closed-form antiderivative W with W' = f. Polynomial: monomial rule;
  /// exponential: exp(i t lambda)/(i t); schwartz: per-sample exponentials.
  Complex antiderivative(double lambda) const;

  const std::string& description() const { return description_; }

 private:
  FunctionSpec() = default;

  Kind kind_ = Kind::polynomial;
  std::vector<Complex> coeffs_;
  double t_ = 0.0;
  std::vector<FourierSample> samples_;
  BoundedTest bounded_;
  std::string description_;
};

}  // namespace ssflab

#endif  // SSFLAB_FUNCTION_SPEC_HPP
