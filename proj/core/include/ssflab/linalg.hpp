// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SSFLAB_LINALG_HPP
#define SSFLAB_LINALG_HPP

#include <Eigen/Dense>
#include <complex>

#include "ssflab/function_spec.hpp"

namespace ssflab {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Dense Hermitian matrix, symmetrized at construction. Immutable.
///
/// The raw input must be Hermitian up to a relative Hilbert-Schmidt defect of
/// 1e-10; anything larger is treated as a modeling error rather than
/// round-off and rejected.
class SelfAdjointOperator {
 public:
  static constexpr double kHermiticityTol = 1e-10;

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  double hermiticity_defect() const { return defect_; }

  friend SelfAdjointOperator make_self_adjoint(const Matrix& raw);

 private:
  SelfAdjointOperator(Matrix entries, double defect)
      : entries_(std::move(entries)), defect_(defect) {}

  Matrix entries_;
  double defect_;
};

/// Validates and symmetrizes: returns (A + A*)/2 with the recorded defect
/// ||A - A*||_2 / max(1, ||A||_2). Throws NonSquareError or HermiticityError.
SelfAdjointOperator make_self_adjoint(const Matrix& raw);

/// Ascending eigenvalues plus an orthonormal eigenvector frame. Backbone of
/// every functional-calculus operation in the library.
class SpectralDecomposition {
 public:
  const RealVector& eigenvalues() const { return eigenvalues_; }
  const Matrix& frame() const { return frame_; }
  int source_dim() const { return source_dim_; }

  double min_eigenvalue() const { return eigenvalues_(0); }
  double max_eigenvalue() const { return eigenvalues_(source_dim_ - 1); }
  double spectral_range() const {
    return max_eigenvalue() - min_eigenvalue();
  }

  friend SpectralDecomposition eigendecompose(const SelfAdjointOperator& a);

 private:
  SpectralDecomposition(RealVector vals, Matrix frame)
      : eigenvalues_(std::move(vals)),
        frame_(std::move(frame)),
        source_dim_(static_cast<int>(eigenvalues_.size())) {}

  RealVector eigenvalues_;
  Matrix frame_;
  int source_dim_;
};

/// Full Hermitian eigendecomposition. The result satisfies, and is checked
/// against, frame* frame = I (1e-12 per entry) and reconstruction of the
/// source within relative Hilbert-Schmidt error 1e-11.
SpectralDecomposition eigendecompose(const SelfAdjointOperator& a);

/// Spectral projector E(lambda): sum of rank-one projectors over eigenvalues
/// <= lambda. Right continuous, so an eigenvalue equal to lambda is included.
Matrix spectral_projector(const SpectralDecomposition& d, double lambda);

/// frame * diag(f(eigenvalues)) * frame*.
Matrix apply_function(const SpectralDecomposition& d, const FunctionSpec& f);

struct MatrixNorms {
  Complex trace;
  double hs_norm;
  double trace_norm;
  double op_norm;
};

/// Trace, Hilbert-Schmidt (Frobenius), trace norm (sum of singular values)
/// and operator norm (largest singular value) of a square matrix.
MatrixNorms norms_and_trace(const Matrix& m);

}  // namespace ssflab

#endif  // SSFLAB_LINALG_HPP
