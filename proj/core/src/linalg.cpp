// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ssflab/linalg.hpp"

#include <sstream>

#include "ssflab/errors.hpp"

namespace ssflab {

SelfAdjointOperator make_self_adjoint(const Matrix& raw) {
  if (raw.rows() != raw.cols()) {
    std::ostringstream os;
    os << "make_self_adjoint: matrix is " << raw.rows() << "x" << raw.cols();
    throw NonSquareError(os.str());
  }
  if (raw.rows() == 0)
    throw NonSquareError("make_self_adjoint: empty matrix");
  const double scale = std::max(1.0, raw.norm());
  const double defect = (raw - raw.adjoint()).norm() / scale;
  if (defect > SelfAdjointOperator::kHermiticityTol) {
    std::ostringstream os;
    os << "make_self_adjoint: hermiticity defect " << defect << " exceeds "
       << SelfAdjointOperator::kHermiticityTol;
    throw HermiticityError(os.str());
  }
  Matrix sym = 0.5 * (raw + raw.adjoint());
  // Pin the diagonal to be exactly real so entries == entries.adjoint().
  for (Eigen::Index i = 0; i < sym.rows(); ++i)
    sym(i, i) = Complex{sym(i, i).real(), 0.0};
  return SelfAdjointOperator(std::move(sym), defect);
}

SpectralDecomposition eigendecompose(const SelfAdjointOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.entries());
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("eigendecompose: eigensolver did not converge");
  SpectralDecomposition d(solver.eigenvalues(), solver.eigenvectors());

  // Contract checks: frame unitarity entrywise and reconstruction in the
  // Hilbert-Schmidt norm.
  const int n = d.source_dim();
  const Matrix gram = d.frame().adjoint() * d.frame();
  const double unit_defect =
      (gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (unit_defect > 1e-12)
    throw ConvergenceError("eigendecompose: frame unitarity defect " +
                           std::to_string(unit_defect));
  const Matrix rebuilt =
      d.frame() * d.eigenvalues().asDiagonal() * d.frame().adjoint();
  const double rel =
      (rebuilt - a.entries()).norm() / std::max(1.0, a.entries().norm());
  if (rel > 1e-11)
    throw ConvergenceError("eigendecompose: reconstruction residual " +
                           std::to_string(rel));
  return d;
}

Matrix spectral_projector(const SpectralDecomposition& d, double lambda) {
  const int n = d.source_dim();
  // Eigenvalues ascend; count how many are <= lambda (right continuity).
  int count = 0;
  while (count < n && d.eigenvalues()(count) <= lambda) ++count;
  if (count == 0) return Matrix::Zero(n, n);
  const auto block = d.frame().leftCols(count);
  return block * block.adjoint();
}

Matrix apply_function(const SpectralDecomposition& d, const FunctionSpec& f) {
  const int n = d.source_dim();
  Vector fx(n);
  try {
    for (int i = 0; i < n; ++i) fx(i) = f.value(d.eigenvalues()(i));
  } catch (const std::exception& e) {
    throw FunctionEvalError(std::string("apply_function: ") + e.what());
  }
  return d.frame() * fx.asDiagonal() * d.frame().adjoint();
}

MatrixNorms norms_and_trace(const Matrix& m) {
  if (m.rows() != m.cols())
    throw NonSquareError("norms_and_trace: matrix is not square");
  MatrixNorms out;
  out.trace = m.trace();
  out.hs_norm = m.norm();
  Eigen::JacobiSVD<Matrix> svd(m);
  out.trace_norm = svd.singularValues().sum();
  out.op_norm = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  return out;
}

}  // namespace ssflab
