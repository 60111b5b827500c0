// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ssflab/errors.hpp"
#include "ssflab/linalg.hpp"
#include "ssflab/pcf.hpp"
#include "ssflab/quadrature.hpp"
#include "ssflab/rng.hpp"

using namespace ssflab;

namespace {

Matrix two_by_two(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("gauss-legendre integrates monomials exactly up to degree 2n-1") {
  for (int n : {1, 2, 4, 7, 16, 32}) {
    const QuadratureRule rule = gauss_legendre_01(n);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        acc += rule.weights[static_cast<std::size_t>(i)] *
               std::pow(rule.nodes[static_cast<std::size_t>(i)], k);
      CHECK(acc == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
    for (std::size_t i = 1; i < rule.nodes.size(); ++i)
      CHECK(rule.nodes[i] > rule.nodes[i - 1]);
  }
}

TEST_CASE("rng streams are reproducible and decorrelated") {
  Rng a(42, 0);
  Rng b(42, 0);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
  Rng c(42, 1);
  bool differs = false;
  Rng a2(42, 0);
  for (int i = 0; i < 10; ++i)
    if (a2.normal() != c.normal()) differs = true;
  CHECK(differs);

  // Loose sanity on the Box-Muller output.
  Rng d(7, 0);
  double mean = 0.0, var = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = d.normal();
    mean += x;
    var += x * x;
  }
  mean /= n;
  var = var / n - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("random_hermitian and random_unitary have the advertised structure") {
  Rng rng(11, 3);
  const Matrix h = random_hermitian(rng, 20);
  CHECK((h - h.adjoint()).norm() == 0.0);
  const Matrix u = random_unitary(rng, 20);
  CHECK((u.adjoint() * u - Matrix::Identity(20, 20)).norm() < 1e-13);
}

TEST_CASE("make_self_adjoint accepts hermitian input and rejects junk") {
  const Matrix id = Matrix::Identity(3, 3);
  const SelfAdjointOperator a = make_self_adjoint(id);
  CHECK(a.hermiticity_defect() == 0.0);
  CHECK((a.entries() - id).norm() == 0.0);

  const Matrix x = two_by_two(0, 1, 1, 0);
  const SelfAdjointOperator b = make_self_adjoint(x);
  CHECK((b.entries() - x).norm() == 0.0);

  CHECK_THROWS_AS(make_self_adjoint(two_by_two(0, 1, 0, 0)),
                  HermiticityError);
  CHECK_THROWS_AS(make_self_adjoint(Matrix::Zero(2, 3)), NonSquareError);
}

TEST_CASE("eigendecompose sorts eigenvalues and reconstructs the source") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 1;
  d(2, 2) = 2;
  const SpectralDecomposition dec = eigendecompose(make_self_adjoint(d));
  CHECK(dec.eigenvalues()(0) == doctest::Approx(1.0));
  CHECK(dec.eigenvalues()(1) == doctest::Approx(2.0));
  CHECK(dec.eigenvalues()(2) == doctest::Approx(3.0));

  const SpectralDecomposition flip =
      eigendecompose(make_self_adjoint(two_by_two(0, 1, 1, 0)));
  CHECK(flip.eigenvalues()(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(flip.eigenvalues()(1) == doctest::Approx(1.0).epsilon(1e-14));
  // Columns are eigenvectors up to phase.
  for (int i = 0; i < 2; ++i) {
    const Vector col = flip.frame().col(i);
    const Vector residual =
        two_by_two(0, 1, 1, 0) * col - flip.eigenvalues()(i) * col;
    CHECK(residual.norm() < 1e-14);
  }

  Rng rng(5, 1);
  const SelfAdjointOperator big = make_self_adjoint(random_hermitian(rng, 50));
  const SpectralDecomposition dbig = eigendecompose(big);
  const Matrix rebuilt =
      dbig.frame() * dbig.eigenvalues().asDiagonal() * dbig.frame().adjoint();
  CHECK((rebuilt - big.entries()).norm() / big.entries().norm() <= 1e-11);
}

TEST_CASE("spectral_projector is right continuous and monotone") {
  Matrix d = Matrix::Zero(2, 2);
  d(1, 1) = 1;
  const SpectralDecomposition dec = eigendecompose(make_self_adjoint(d));
  const Matrix at0 = spectral_projector(dec, 0.0);
  CHECK(at0(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(at0(1, 1)) < 1e-15);
  CHECK((spectral_projector(dec, 1.0) - Matrix::Identity(2, 2)).norm() <
        1e-14);
  CHECK(spectral_projector(dec, -0.5).norm() == 0.0);

  Rng rng(9, 2);
  const SelfAdjointOperator a = make_self_adjoint(random_hermitian(rng, 20));
  const SpectralDecomposition da = eigendecompose(a);
  CHECK(spectral_projector(da, da.min_eigenvalue() - 1e-6).norm() == 0.0);
  CHECK((spectral_projector(da, da.max_eigenvalue()) -
         Matrix::Identity(20, 20))
            .norm() < 1e-12);
  // Monotone and piecewise constant with jumps exactly at eigenvalues.
  for (int i = 0; i + 1 < 20; ++i) {
    const double lo = da.eigenvalues()(i);
    const double hi = da.eigenvalues()(i + 1);
    const Matrix e1 = spectral_projector(da, lo);
    const Matrix mid = spectral_projector(da, 0.5 * (lo + hi));
    const Matrix e2 = spectral_projector(da, hi);
    CHECK((mid - e1).norm() < 1e-12);  // constant between eigenvalues
    const Matrix gap = e2 - e1;        // a projector increment
    Eigen::SelfAdjointEigenSolver<Matrix> es(gap);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
    // Hermitian idempotent.
    CHECK((e2 * e2 - e2).norm() < 1e-12);
    CHECK((e2 - e2.adjoint()).norm() < 1e-13);
  }
}

TEST_CASE("apply_function matches direct routes") {
  const Matrix x = two_by_two(0, 1, 1, 0);
  const SpectralDecomposition d = eigendecompose(make_self_adjoint(x));

  const Matrix identity_map =
      apply_function(d, FunctionSpec::polynomial_real({0, 1}));
  CHECK((identity_map - x).norm() < 1e-12);

  const Matrix exp0 = apply_function(d, FunctionSpec::exponential(0.0));
  CHECK((exp0 - Matrix::Identity(2, 2)).norm() < 1e-14);

  const Matrix sq = apply_function(d, FunctionSpec::polynomial_real({0, 0, 1}));
  CHECK((sq - Matrix::Identity(2, 2)).norm() < 1e-13);

  // Polynomial calculus agrees with Horner within 1e-10 relative.
  Rng rng(21, 4);
  Matrix r = random_hermitian(rng, 60);
  r *= 1.5 / r.norm() * std::sqrt(60.0);  // keep entries O(1)
  const SelfAdjointOperator a = make_self_adjoint(r);
  const SpectralDecomposition da = eigendecompose(a);
  const std::vector<Complex> coeffs{1.0, -0.5, 2.0, 0.25, -1.0, 0.125, 1.0,
                                    -0.75};
  const Matrix via_spec =
      apply_function(da, FunctionSpec::polynomial(coeffs));
  const Matrix via_horner = oracles::horner_poly(a.entries(), coeffs);
  CHECK((via_spec - via_horner).norm() / via_horner.norm() < 1e-10);
}

TEST_CASE("norms_and_trace computes the four norms") {
  const MatrixNorms id3 = norms_and_trace(Matrix::Identity(3, 3));
  CHECK(id3.trace.real() == doctest::Approx(3.0));
  CHECK(id3.hs_norm == doctest::Approx(std::sqrt(3.0)));
  CHECK(id3.trace_norm == doctest::Approx(3.0));
  CHECK(id3.op_norm == doctest::Approx(1.0));

  const MatrixNorms flip = norms_and_trace(two_by_two(0, 1, 1, 0));
  CHECK(std::abs(flip.trace) < 1e-15);
  CHECK(flip.trace_norm == doctest::Approx(2.0));
  CHECK(flip.op_norm == doctest::Approx(1.0));

  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1;
  d(1, 1) = 2;
  d(2, 2) = 3;
  CHECK(norms_and_trace(d).trace.real() == doctest::Approx(6.0));

  CHECK_THROWS_AS(norms_and_trace(Matrix::Zero(2, 3)), NonSquareError);

  // Trace cyclicity on random pairs.
  Rng rng(33, 5);
  for (int rep = 0; rep < 3; ++rep) {
    Matrix a(30, 30), b(30, 30);
    for (int i = 0; i < 30; ++i)
      for (int j = 0; j < 30; ++j) {
        a(i, j) = rng.complex_normal();
        b(i, j) = rng.complex_normal();
      }
    const Complex ab = (a * b).trace();
    const Complex ba = (b * a).trace();
    CHECK(std::abs(ab - ba) / std::abs(ab) < 1e-11);
  }
}

TEST_CASE("pcf construction, evaluation and exact integration") {
  // f = 1 on [0, 1).
  const auto f = PiecewiseConstantFunction::from_cells({0.0, 1.0}, {1.0},
                                                       0.0, 1.0);
  CHECK(integrate_pcf(f, FunctionSpec::polynomial_real({0, 0, 1})).real() ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  const Complex full_period =
      integrate_pcf(f, FunctionSpec::exponential(2.0 * M_PI));
  CHECK(std::abs(full_period) < 1e-14);

  CHECK(f.value_at(-0.1) == 0.0);
  CHECK(f.value_at(0.0) == 1.0);
  CHECK(f.value_at(0.999) == 1.0);
  CHECK(f.value_at(1.0) == 0.0);

  CHECK_THROWS_AS(
      integrate_pcf(f, FunctionSpec::bounded_test(
                           {[](double x) { return x; },
                            [](double) { return 1.0; }, 1.0, "id"})),
      UnsupportedWeightError);

  // Jump assembly merges equal positions and pads with zero cells.
  const auto g = PiecewiseConstantFunction::from_jumps(
      {{0.0, 1.0}, {0.0, 0.5}, {2.0, -1.5}}, -1.0, 3.0);
  CHECK(g.value_at(-0.5) == 0.0);
  CHECK(g.value_at(1.0) == doctest::Approx(1.5));
  CHECK(g.value_at(2.5) == 0.0);
  CHECK(g.integral() == doctest::Approx(3.0));
  CHECK(g.l1_norm() == doctest::Approx(3.0));
  CHECK(g.min_value() == 0.0);

  const auto z = PiecewiseConstantFunction::zero(-1.0, 1.0);
  CHECK(z.integral() == 0.0);
  CHECK(l1_distance(g, g) == 0.0);
}

TEST_CASE("function spec payloads and stable divided differences") {
  const FunctionSpec p = FunctionSpec::polynomial_real({1, 0, 3});
  CHECK(p.degree() == 2);
  CHECK(p.value(2.0).real() == doctest::Approx(13.0));
  CHECK(p.derivative(2.0).real() == doctest::Approx(12.0));
  // Divided difference of 3x^2+1 is 3(a+b); confluent value is p'.
  CHECK(p.divided_difference(1.0, 2.0, 1e-8).real() ==
        doctest::Approx(9.0).epsilon(1e-15));
  CHECK(p.divided_difference(2.0, 2.0, 1e-8).real() ==
        doctest::Approx(12.0).epsilon(1e-15));

  // Coincident exponential kernel entries equal i t e^{i t a}.
  const double t = 2.5;
  const FunctionSpec e = FunctionSpec::exponential(t);
  const Complex confluent = e.divided_difference(0.7, 0.7, 1e-8);
  const Complex expected =
      Complex{0.0, t} * std::exp(Complex{0.0, t * 0.7});
  CHECK(std::abs(confluent - expected) < 1e-15);
  // And the stable form stays accurate for nearly coincident points where
  // the naive ratio would cancel catastrophically.
  const Complex nearby = e.divided_difference(0.7 + 1e-7, 0.7, 0.0);
  CHECK(std::abs(nearby - expected) < 1e-6 * std::abs(expected));

  // Gaussian synthesis reproduces exp(-x^2/2) on the spectral window.
  const FunctionSpec gauss = FunctionSpec::gaussian(1.0, 12.0, 256);
  for (double x : {-3.0, -1.3, 0.0, 0.4, 2.9}) {
    CHECK(std::abs(gauss.value(x) - std::exp(-0.5 * x * x)) < 1e-10);
    CHECK(std::abs(gauss.derivative(x) - (-x) * std::exp(-0.5 * x * x)) <
          1e-10);
  }

  CHECK_THROWS_AS(FunctionSpec::schwartz({}), FunctionEvalError);
  CHECK(p.antiderivative(1.0).real() == doctest::Approx(2.0));  // x + x^3
}

TEST_CASE("exp_it_taylor oracle matches spectral calculus") {
  Rng rng(77, 6);
  const SelfAdjointOperator a = make_self_adjoint(random_hermitian(rng, 12));
  const SpectralDecomposition d = eigendecompose(a);
  for (double t : {0.3, 1.7, -4.0}) {
    const Matrix via_spec = apply_function(d, FunctionSpec::exponential(t));
    const Matrix via_taylor = oracles::exp_it_taylor(a.entries(), t);
    CHECK((via_spec - via_taylor).norm() < 1e-12 * via_spec.norm());
  }
}
