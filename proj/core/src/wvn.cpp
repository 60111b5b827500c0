// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ssflab/wvn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ssflab/errors.hpp"
#include "ssflab/parallel.hpp"

namespace ssflab {

namespace {

const Complex kI{0.0, 1.0};

constexpr double kRankTol = 1e-10;
constexpr double kZeroSliceTol = 1e-14;

// Residual norm of f outside the window (-a, a], from eigen coefficients.
double window_residual(const RealVector& eigenvalues, const Vector& coeffs,
                       double a) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double lam = eigenvalues(i);
    if (lam <= -a || lam > a) acc += std::norm(coeffs(i));
  }
  return std::sqrt(acc);
}

}  // namespace

std::vector<double> uniform_t_grid(double T, int count) {
  if (count < 1) throw Error("uniform_t_grid: count must be >= 1");
  std::vector<double> grid(static_cast<std::size_t>(count));
  if (count == 1) {
    grid[0] = 0.0;
    return grid;
  }
  const double h = 2.0 * T / (count - 1);
  for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = -T + i * h;
  return grid;
}

double spectral_window(const SelfAdjointOperator& a,
                       const std::vector<Vector>& vectors, double eps) {
  if (vectors.empty())
    throw EmptyVectorListError("spectral_window: no vectors given");
  if (eps <= 0.0) throw Error("spectral_window: eps must be positive");
  const SpectralDecomposition d = eigendecompose(a);
  double window = 0.0;
  for (const Vector& f : vectors) {
    if (f.size() != a.dim())
      throw DimensionMismatchError("spectral_window: vector dimension");
    if (std::abs(f.norm() - 1.0) > 1e-12)
      throw Error("spectral_window: vectors must be normalized");
    const Vector coeffs = d.frame().adjoint() * f;
    // Candidate half-widths are the eigenvalue magnitudes, each nudged up a
    // hair so mass sitting at -|lambda| (an open endpoint) is included.
    std::vector<double> candidates;
    candidates.reserve(static_cast<std::size_t>(d.source_dim()));
    for (Eigen::Index i = 0; i < d.eigenvalues().size(); ++i)
      candidates.push_back(std::abs(d.eigenvalues()(i)));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());
    double a_l = 0.0;
    bool found = false;
    for (double c : candidates) {
      const double padded = c * (1.0 + 1e-9) + 1e-12;
      if (window_residual(d.eigenvalues(), coeffs, padded) < eps) {
        a_l = padded;
        found = true;
        break;
      }
    }
    if (!found)
      throw Error("spectral_window: no admissible half-width (eps too small)");
    window = std::max(window, a_l);
  }
  return window;
}

ProjectionBasis wvn_projection(const SelfAdjointOperator& a,
                               const std::vector<Vector>& vectors,
                               const SliceConfig& cfg,
                               const std::vector<double>& t_grid) {
  if (vectors.empty())
    throw EmptyVectorListError("wvn_projection: no vectors given");
  if (static_cast<int>(vectors.size()) != cfg.L)
    throw DimensionMismatchError("wvn_projection: cfg.L != vector count");
  if (cfg.n < 1 || cfg.a <= 0.0)
    throw Error("wvn_projection: invalid slice config");
  const int dim = a.dim();
  const SpectralDecomposition d = eigendecompose(a);

  // Slice index of each eigenvalue inside the window (-a, a]. Slices are
  // F_k = F(((2k-2-n)/n a, (2k-n)/n a]), k = 1..n, so k = ceil((lam+a) n/(2a)).
  // Only nonempty slices are materialized; n may be astronomically large.
  std::map<std::int64_t, std::vector<int>> slice_members;
  for (int i = 0; i < dim; ++i) {
    const double lam = d.eigenvalues()(i);
    if (lam <= -cfg.a || lam > cfg.a) continue;
    const double x = (lam + cfg.a) * static_cast<double>(cfg.n) / (2.0 * cfg.a);
    std::int64_t k = static_cast<std::int64_t>(std::ceil(x));
    k = std::clamp<std::int64_t>(k, 1, cfg.n);
    slice_members[k].push_back(i);
  }

  // Candidate vectors g_{kl} = normalized F_k f_l, in (k, l) order.
  std::vector<Vector> candidates;
  for (const auto& [k, members] : slice_members) {
    (void)k;
    for (int l = 0; l < cfg.L; ++l) {
      const Vector& f = vectors[static_cast<std::size_t>(l)];
      Vector g = Vector::Zero(dim);
      for (int i : members) {
        const Complex c = d.frame().col(i).dot(f);
        g += c * d.frame().col(i);
      }
      const double norm = g.norm();
      if (norm <= kZeroSliceTol) continue;  // F_k f_l = 0 is skipped
      candidates.push_back(g / norm);
    }
  }
  if (candidates.empty())
    throw DegenerateInputError("wvn_projection: every slice vector vanished");

  // Modified Gram-Schmidt with a re-orthogonalization pass.
  Matrix frame(dim, candidates.size());
  int rank = 0;
  for (const Vector& cand : candidates) {
    Vector g = cand;
    for (int pass = 0; pass < 2; ++pass)
      if (rank > 0) {
        const auto q = frame.leftCols(rank);
        g -= q * (q.adjoint() * g).eval();
      }
    const double norm = g.norm();
    if (norm <= kRankTol) continue;  // linearly dependent, dropped
    frame.col(rank) = g / norm;
    ++rank;
  }
  frame.conservativeResize(Eigen::NoChange, rank);

  WvnDiagnostics diag;
  diag.vector_residuals.resize(vectors.size());
  for (std::size_t l = 0; l < vectors.size(); ++l) {
    const Vector& f = vectors[l];
    const Vector res = f - frame * (frame.adjoint() * f).eval();
    diag.vector_residuals[l] = res.norm();
  }
  {
    const Matrix af = a.entries() * frame;
    diag.offdiag_a = (af - frame * (frame.adjoint() * af).eval()).norm();
  }
  {
    // max_t ||(I-P) e^{itA} P||_2 over the sampled grid.
    const Matrix w = d.frame().adjoint() * frame;  // dim x rank
    std::vector<double> per_t(t_grid.size(), 0.0);
    parallel_for(t_grid.size(), [&](std::size_t q) {
      const double t = t_grid[q];
      Matrix phased = w;
      for (int i = 0; i < dim; ++i)
        phased.row(i) *= std::exp(kI * (t * d.eigenvalues()(i)));
      const Matrix expf = d.frame() * phased;
      per_t[q] = (expf - frame * (frame.adjoint() * expf).eval()).norm();
    });
    diag.offdiag_exp_a =
        per_t.empty() ? 0.0 : *std::max_element(per_t.begin(), per_t.end());
  }
  return ProjectionBasis(std::move(frame), std::move(diag), cfg);
}

std::int64_t choose_slice_count(double a, int L, double T, double eps) {
  if (a <= 0.0 || L < 1 || T < 0.0 || eps <= 0.0)
    throw Error("choose_slice_count: parameters must be positive (T >= 0)");
  constexpr double kMaxN = 9.0e18;
  const double first = std::pow(static_cast<double>(L) * a / eps, 2.0);
  double second = 0.0;
  if (T > 0.0) {
    // (T L a e^{a sqrt(L) T} / eps)^2, screened in log space for overflow.
    const double log_second =
        2.0 * (std::log(T * L * a) + a * std::sqrt(static_cast<double>(L)) * T -
               std::log(eps));
    if (log_second > std::log(kMaxN))
      throw OverflowError(
          "choose_slice_count: Gronwall bound exceeds representable range");
    second = std::exp(log_second);
  }
  const double bound = std::max(first, second);
  if (!(bound < kMaxN))
    throw OverflowError("choose_slice_count: bound exceeds representable range");
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(bound)));
}

TruncatedPerturbation perturbation_truncation(const SelfAdjointOperator& v,
                                              double eps) {
  if (eps <= 0.0) throw Error("perturbation_truncation: eps must be positive");
  const SpectralDecomposition d = eigendecompose(v);
  const int n = d.source_dim();

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return std::abs(d.eigenvalues()(i)) > std::abs(d.eigenvalues()(j));
  });

  // Minimal L with tail^2 = sum_{l>L} tau_l^2 < eps^2.
  std::vector<double> suffix(static_cast<std::size_t>(n) + 1, 0.0);
  for (int l = n - 1; l >= 0; --l) {
    const double tau = d.eigenvalues()(order[static_cast<std::size_t>(l)]);
    suffix[static_cast<std::size_t>(l)] =
        suffix[static_cast<std::size_t>(l) + 1] + tau * tau;
  }
  int L = 0;
  while (L <= n && !(std::sqrt(suffix[static_cast<std::size_t>(L)]) < eps))
    ++L;
  L = std::min(L, n);

  TruncatedPerturbation out;
  out.L = L;
  out.tail_norm = std::sqrt(suffix[static_cast<std::size_t>(L)]);
  out.weights.resize(static_cast<std::size_t>(L));
  out.vectors.resize(v.dim(), L);
  double weight_sum = 0.0;
  for (int l = 0; l < L; ++l) {
    const int idx = order[static_cast<std::size_t>(l)];
    out.weights[static_cast<std::size_t>(l)] = d.eigenvalues()(idx);
    out.vectors.col(l) = d.frame().col(idx);
    weight_sum += std::abs(d.eigenvalues()(idx));
  }
  out.epsilon_prime =
      (weight_sum > 0.0) ? std::min(eps, eps / weight_sum) : eps;
  return out;
}

ProjectionBasis wvn_pair_projection(const PerturbationPair& pair, double eps,
                                    double T, const WvnOptions& options) {
  if (eps <= 0.0 || T <= 0.0)
    throw Error("wvn_pair_projection: eps and T must be positive");
  const TruncatedPerturbation trunc = perturbation_truncation(pair.v(), eps);
  if (trunc.L == 0) {
    // V below eps already; the empty projection satisfies every bound.
    WvnDiagnostics diag;
    diag.offdiag_v = pair.v().entries().norm();
    diag.offdiag_hp = 0.0;
    SliceConfig cfg;
    cfg.L = 0;
    cfg.T = T;
    cfg.epsilon = eps;
    return ProjectionBasis(Matrix::Zero(pair.dim(), 0), std::move(diag), cfg);
  }
  std::vector<Vector> vectors;
  vectors.reserve(static_cast<std::size_t>(trunc.L));
  for (int l = 0; l < trunc.L; ++l) vectors.push_back(trunc.vectors.col(l));

  SliceConfig cfg;
  cfg.L = trunc.L;
  cfg.T = T;
  cfg.epsilon = trunc.epsilon_prime;
  cfg.a = spectral_window(pair.h0(), vectors, trunc.epsilon_prime);
  if (options.n_override) {
    cfg.n = *options.n_override;
  } else if (options.n_cap > 0) {
    try {
      cfg.n = std::min(
          options.n_cap,
          choose_slice_count(cfg.a, cfg.L, T, trunc.epsilon_prime));
    } catch (const OverflowError&) {
      cfg.n = options.n_cap;
    }
  } else {
    cfg.n = choose_slice_count(cfg.a, cfg.L, T, trunc.epsilon_prime);
  }

  ProjectionBasis basis = wvn_projection(pair.h0(), vectors, cfg,
                                         uniform_t_grid(T, options.t_grid_points));
  WvnDiagnostics& diag = basis.diagnostics();
  const Matrix& frame = basis.frame();
  diag.offdiag_v =
      (pair.v().entries() -
       frame * (frame.adjoint() * pair.v().entries()).eval())
          .norm();
  const Matrix hf = pair.h().entries() * frame;
  diag.offdiag_hp = (hf - frame * (frame.adjoint() * hf).eval()).norm();
  return basis;
}

SelfAdjointOperator compress(const SelfAdjointOperator& a,
                             const ProjectionBasis& p) {
  if (p.ambient_dim() != a.dim())
    throw DimensionMismatchError("compress: projection and operator dims");
  const Matrix m = p.frame().adjoint() * a.entries() * p.frame();
  return make_self_adjoint(m);
}

}  // namespace ssflab
