// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ssflab/frechet.hpp"

#include <cmath>

#include "ssflab/errors.hpp"
#include "ssflab/quadrature.hpp"

namespace ssflab {

namespace {

const Complex kI{0.0, 1.0};

void require_same_dim(const SelfAdjointOperator& a,
                      const SelfAdjointOperator& b, const char* where) {
  if (a.dim() != b.dim())
    throw DimensionMismatchError(std::string(where) + ": dimensions " +
                                 std::to_string(a.dim()) + " vs " +
                                 std::to_string(b.dim()));
}

// Powers A^0 .. A^max_pow.
std::vector<Matrix> matrix_powers(const Matrix& a, int max_pow) {
  std::vector<Matrix> pows;
  pows.reserve(static_cast<std::size_t>(max_pow) + 1);
  pows.push_back(Matrix::Identity(a.rows(), a.cols()));
  for (int k = 1; k <= max_pow; ++k) pows.push_back(pows.back() * a);
  return pows;
}

// Horner evaluation of p at a matrix argument.
Matrix horner(const Matrix& a, const FunctionSpec& p) {
  const auto& c = p.coeffs();
  const Eigen::Index n = a.rows();
  Matrix acc = Matrix::Zero(n, n);
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = (acc * a).eval();
    acc += *it * Matrix::Identity(n, n);
  }
  return acc;
}

// D(exp(it .)).V with a precomputed decomposition of the base point.
Matrix frechet_exp_doi_with(const SpectralDecomposition& d, const Matrix& v,
                            double t) {
  return doi_divided_difference(d, d, FunctionSpec::exponential(t), v);
}

}  // namespace

double doi_confluence_threshold(double spectral_range) {
  return 1e-8 * std::max(1.0, spectral_range);
}

DirectionalDerivative frechet_poly(const SelfAdjointOperator& h0,
                                   const SelfAdjointOperator& v,
                                   const FunctionSpec& p) {
  require_same_dim(h0, v, "frechet_poly");
  if (p.kind() != FunctionSpec::Kind::polynomial)
    throw FunctionEvalError("frechet_poly: spec is not a polynomial");
  const int deg = p.degree();
  const int n = h0.dim();
  DirectionalDerivative out;
  out.method = DirectionalDerivative::Method::power_sum;
  out.quadrature_nodes = 0;
  if (deg < 1) {
    out.matrix = Matrix::Zero(n, n);
    return out;
  }
  const std::vector<Matrix> pows = matrix_powers(h0.entries(), deg - 1);
  // sum_j (sum_{r>j} c_r H0^{r-1-j}) V H0^j
  Matrix acc = Matrix::Zero(n, n);
  for (int j = 0; j < deg; ++j) {
    Matrix left = Matrix::Zero(n, n);
    for (int r = j + 1; r <= deg; ++r)
      left += p.coeffs()[static_cast<std::size_t>(r)] *
              pows[static_cast<std::size_t>(r - 1 - j)];
    acc += left * v.entries() * pows[static_cast<std::size_t>(j)];
  }
  out.matrix = std::move(acc);
  return out;
}

PathDerivativeCheck path_derivative_check(const SelfAdjointOperator& h0,
                                          const SelfAdjointOperator& v,
                                          const FunctionSpec& p, double s,
                                          double h) {
  require_same_dim(h0, v, "path_derivative_check");
  if (s < 0.0 || s > 1.0)
    throw Error("path_derivative_check: s must lie in [0, 1]");
  if (h <= 0.0 || h > 1e-4)
    throw Error("path_derivative_check: h must lie in (0, 1e-4]");
  const SelfAdjointOperator hs =
      make_self_adjoint(h0.entries() + s * v.entries());
  PathDerivativeCheck out;
  out.analytic = frechet_poly(hs, v, p).matrix;
  const Matrix plus = h0.entries() + (s + h) * v.entries();
  const Matrix minus = h0.entries() + (s - h) * v.entries();
  out.finite_diff = (horner(plus, p) - horner(minus, p)) / (2.0 * h);
  out.err = (out.analytic - out.finite_diff).norm();
  return out;
}

Matrix doi_divided_difference(const SpectralDecomposition& da,
                              const SpectralDecomposition& db,
                              const FunctionSpec& f, const Matrix& x) {
  if (da.source_dim() != x.rows() || db.source_dim() != x.cols())
    throw DimensionMismatchError(
        "doi_divided_difference: X is incompatible with the decompositions");
  const double range =
      std::max(da.max_eigenvalue(), db.max_eigenvalue()) -
      std::min(da.min_eigenvalue(), db.min_eigenvalue());
  const double confluence = doi_confluence_threshold(range);
  const Matrix mid = da.frame().adjoint() * x * db.frame();
  Matrix kernel(da.source_dim(), db.source_dim());
  try {
    for (int i = 0; i < da.source_dim(); ++i) {
      const double alpha = da.eigenvalues()(i);
      for (int j = 0; j < db.source_dim(); ++j)
        kernel(i, j) =
            f.divided_difference(alpha, db.eigenvalues()(j), confluence);
    }
  } catch (const UnsupportedWeightError&) {
    throw;
  } catch (const std::exception& e) {
    throw FunctionEvalError(std::string("doi_divided_difference: ") +
                            e.what());
  }
  return da.frame() * kernel.cwiseProduct(mid) * db.frame().adjoint();
}

DirectionalDerivative frechet_exp(const SelfAdjointOperator& h0,
                                  const SelfAdjointOperator& v, double t,
                                  DirectionalDerivative::Method method,
                                  int nodes) {
  require_same_dim(h0, v, "frechet_exp");
  const SpectralDecomposition d = eigendecompose(h0);
  DirectionalDerivative out;
  if (method == DirectionalDerivative::Method::doi) {
    out.method = DirectionalDerivative::Method::doi;
    out.quadrature_nodes = 0;
    out.matrix = frechet_exp_doi_with(d, v.entries(), t);
    return out;
  }
  if (method != DirectionalDerivative::Method::duhamel_quadrature)
    throw Error("frechet_exp: method must be doi or duhamel_quadrature");
  if (nodes < 1) throw Error("frechet_exp: quadrature needs nodes >= 1");

  // it sum_k w_k e^{it a_k H0} V e^{it(1-a_k) H0}, carried out in the
  // eigenbasis where each node contributes entrywise phases.
  const int n = h0.dim();
  const Matrix w = d.frame().adjoint() * v.entries() * d.frame();
  const QuadratureRule rule = gauss_legendre_01(nodes);
  Matrix acc = Matrix::Zero(n, n);
  for (int q = 0; q < nodes; ++q) {
    const double a = rule.nodes[static_cast<std::size_t>(q)];
    const double wq = rule.weights[static_cast<std::size_t>(q)];
    for (int i = 0; i < n; ++i) {
      const Complex pi = std::exp(kI * (t * a * d.eigenvalues()(i)));
      for (int j = 0; j < n; ++j) {
        const Complex pj =
            std::exp(kI * (t * (1.0 - a) * d.eigenvalues()(j)));
        acc(i, j) += wq * pi * w(i, j) * pj;
      }
    }
  }
  out.method = DirectionalDerivative::Method::duhamel_quadrature;
  out.quadrature_nodes = nodes;
  out.matrix = (kI * t) * (d.frame() * acc * d.frame().adjoint());
  return out;
}

Matrix second_order_remainder_exp(const SelfAdjointOperator& h,
                                  const SelfAdjointOperator& h0,
                                  const SelfAdjointOperator& v, double t) {
  require_same_dim(h, h0, "second_order_remainder_exp");
  require_same_dim(h0, v, "second_order_remainder_exp");
  const double scale = std::max(1.0, h.entries().norm());
  const double mismatch =
      (h.entries() - h0.entries() - v.entries()).norm() / scale;
  if (mismatch > 1e-12)
    throw PairMismatchError("second_order_remainder_exp: H - H0 - V has norm " +
                            std::to_string(mismatch));
  const SpectralDecomposition dh = eigendecompose(h);
  const SpectralDecomposition d0 = eigendecompose(h0);
  const FunctionSpec et = FunctionSpec::exponential(t);
  return apply_function(dh, et) - apply_function(d0, et) -
         frechet_exp_doi_with(d0, v.entries(), t);
}

DirectionalDerivative frechet_schwartz(const SelfAdjointOperator& h0,
                                       const SelfAdjointOperator& v,
                                       const FunctionSpec& f) {
  require_same_dim(h0, v, "frechet_schwartz");
  if (f.kind() != FunctionSpec::Kind::schwartz)
    throw FunctionEvalError("frechet_schwartz: spec is not schwartz");
  const SpectralDecomposition d = eigendecompose(h0);
  const int n = h0.dim();
  Matrix acc = Matrix::Zero(n, n);
  for (const FourierSample& s : f.fourier_samples())
    acc += s.weight * s.fhat * frechet_exp_doi_with(d, v.entries(), s.t);
  DirectionalDerivative out;
  out.method = DirectionalDerivative::Method::doi;
  out.quadrature_nodes = static_cast<int>(f.fourier_samples().size());
  out.matrix = std::move(acc);
  return out;
}

std::vector<Complex> second_order_poly_remainder_traces(
    const SelfAdjointOperator& h, const SelfAdjointOperator& h0,
    const SelfAdjointOperator& v, const std::vector<FunctionSpec>& polys) {
  require_same_dim(h, h0, "second_order_poly_remainder_traces");
  require_same_dim(h0, v, "second_order_poly_remainder_traces");
  int max_deg = 0;
  for (const FunctionSpec& p : polys) {
    if (p.kind() != FunctionSpec::Kind::polynomial)
      throw FunctionEvalError("poly remainder traces: non-polynomial spec");
    max_deg = std::max(max_deg, p.degree());
  }
  std::vector<Complex> traces(polys.size(), Complex{0.0, 0.0});
  if (max_deg < 2) return traces;

  const int m = max_deg - 2;  // largest exponent appearing anywhere
  const std::vector<Matrix> hp = matrix_powers(h.entries(), m);
  const std::vector<Matrix> h0p = matrix_powers(h0.entries(), m);
  for (int k = 0; k <= m; ++k) {
    const Matrix sk =
        v.entries() * h0p[static_cast<std::size_t>(k)] * v.entries();
    for (int j = 0; k + j <= m; ++j) {
      const Matrix x = sk * h0p[static_cast<std::size_t>(j)];
      for (std::size_t ip = 0; ip < polys.size(); ++ip) {
        const FunctionSpec& p = polys[ip];
        const int deg = p.degree();
        for (int r = j + k + 2; r <= deg; ++r) {
          const Complex cr = p.coeffs()[static_cast<std::size_t>(r)];
          if (cr == Complex{0.0, 0.0}) continue;
          const int a = r - j - k - 2;
          const Complex tr =
              (hp[static_cast<std::size_t>(a)].transpose().cwiseProduct(x))
                  .sum();
          traces[ip] += cr * tr;
        }
      }
    }
  }
  return traces;
}

Complex second_order_poly_remainder_trace(const SelfAdjointOperator& h,
                                          const SelfAdjointOperator& h0,
                                          const SelfAdjointOperator& v,
                                          const FunctionSpec& p) {
  return second_order_poly_remainder_traces(h, h0, v, {p})[0];
}

}  // namespace ssflab
