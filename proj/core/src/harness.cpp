// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ssflab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "ssflab/errors.hpp"
#include "ssflab/rng.hpp"

namespace ssflab {

namespace {

const Complex kI{0.0, 1.0};

constexpr std::uint64_t kH0Stream = 1;
constexpr std::uint64_t kVStream = 2;

std::string poly_name(const std::vector<double>& coeffs) {
  std::ostringstream os;
  os << "poly_deg" << (coeffs.size() - 1);
  return os.str();
}

double rel_gap(Complex lhs, Complex rhs) {
  return std::abs(lhs - rhs) /
         std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

// ||(I-P)VP||_2, the sandwiched off-diagonal block used by the Cauchy bound.
double sandwiched_offdiag(const Matrix& v, const Matrix& frame) {
  const Matrix vf = v * frame;
  return (vf - frame * (frame.adjoint() * vf).eval()).norm();
}

}  // namespace

SelfAdjointOperator build_h0(const Scenario& sc, int dim) {
  switch (sc.h0_spec.kind) {
    case H0Spec::Kind::dense_random: {
      Rng rng(sc.seed, kH0Stream);
      Matrix a = random_hermitian(rng, dim);
      SelfAdjointOperator op = make_self_adjoint(a);
      const double op_norm = hermitian_op_norm(op);
      if (op_norm > 0) a *= sc.h0_spec.norm / op_norm;
      return make_self_adjoint(a);
    }
    case H0Spec::Kind::diagonal_formula: {
      Matrix a = Matrix::Zero(dim, dim);
      for (int k = 0; k < dim; ++k)
        a(k, k) = sc.h0_spec.c * std::pow(static_cast<double>(k + 1),
                                          sc.h0_spec.p);
      return make_self_adjoint(a);
    }
    case H0Spec::Kind::lattice_laplacian: {
      Matrix a = Matrix::Zero(dim, dim);
      for (int k = 0; k < dim; ++k) {
        a(k, k) = 2.0;
        if (k + 1 < dim) {
          a(k, k + 1) = -1.0;
          a(k + 1, k) = -1.0;
        }
      }
      return make_self_adjoint(a);
    }
  }
  throw Error("build_h0: unreachable kind");
}

SelfAdjointOperator build_v(const Scenario& sc, int dim) {
  Rng rng(sc.seed, kVStream);
  Matrix v;
  switch (sc.v_spec.kind) {
    case VSpec::Kind::dense_random: {
      v = random_hermitian(rng, dim);
      break;
    }
    case VSpec::Kind::random_hs: {
      Matrix a(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          a(i, j) = rng.complex_normal() *
                    std::pow(sc.v_spec.decay, static_cast<double>(i + j));
      v = 0.5 * (a + a.adjoint()).eval();
      break;
    }
    case VSpec::Kind::rank_r: {
      const int r = std::min(sc.v_spec.rank, dim);
      // Seed vectors with an exponential envelope, orthonormalized, combined
      // with weights tau_l = 2^{1-l}.
      Matrix f(dim, r);
      for (int l = 0; l < r; ++l) {
        Vector g(dim);
        for (int i = 0; i < dim; ++i)
          g(i) = rng.complex_normal() *
                 std::pow(sc.v_spec.decay, static_cast<double>(i));
        for (int m = 0; m < l; ++m) g -= f.col(m) * (f.col(m).dot(g));
        f.col(l) = g / g.norm();
      }
      v = Matrix::Zero(dim, dim);
      for (int l = 0; l < r; ++l)
        v += std::pow(2.0, -static_cast<double>(l)) * f.col(l) *
             f.col(l).adjoint();
      break;
    }
  }
  const double hs = v.norm();
  if (hs > 0 && sc.v_spec.hs_norm > 0) v *= sc.v_spec.hs_norm / hs;
  if (sc.v_spec.hs_norm == 0.0) v.setZero();
  return make_self_adjoint(v);
}

PerturbationPair build_pair(const Scenario& sc) {
  return PerturbationPair(build_h0(sc, sc.ambient_dim),
                          build_v(sc, sc.ambient_dim));
}

ProjectionBasis scheduled_projection(const Scenario& sc,
                                     const PerturbationPair& pair,
                                     std::size_t step) {
  if (step >= sc.epsilon_schedule.size())
    throw Error("scheduled_projection: step out of range");
  WvnOptions options;
  options.t_grid_points = sc.t_grid_points;
  options.n_cap = sc.n_cap;
  if (!sc.slice_counts.empty()) options.n_override = sc.slice_counts[step];
  return wvn_pair_projection(pair, sc.epsilon_schedule[step], sc.T, options);
}

ConvergenceTable run_polynomial_convergence(const Scenario& sc) {
  if (sc.polynomials.empty())
    throw ValidationError("run_polynomial_convergence: no polynomials");
  const PerturbationPair pair = build_pair(sc);
  std::vector<FunctionSpec> polys;
  polys.reserve(sc.polynomials.size());
  for (const auto& c : sc.polynomials)
    polys.push_back(FunctionSpec::polynomial_real(c));

  const std::vector<Complex> full =
      second_order_poly_remainder_traces(pair.h(), pair.h0(), pair.v(), polys);

  ConvergenceTable table;
  table.provenance = scenario_hash(sc);
  for (std::size_t step = 0; step < sc.epsilon_schedule.size(); ++step) {
    const ProjectionBasis p = scheduled_projection(sc, pair, step);
    std::vector<Complex> comp(polys.size(), Complex{0.0, 0.0});
    if (p.rank() > 0) {
      const PerturbationPair cpair(compress(pair.h0(), p),
                                   compress(pair.v(), p));
      comp = second_order_poly_remainder_traces(cpair.h(), cpair.h0(),
                                                cpair.v(), polys);
    }
    for (std::size_t ip = 0; ip < polys.size(); ++ip) {
      ConvergenceRow row;
      row.step_index = static_cast<int>(step);
      row.epsilon = sc.epsilon_schedule[step];
      row.rank = p.rank();
      row.quantity = poly_name(sc.polynomials[ip]);
      row.lhs = full[ip];
      row.rhs = comp[ip];
      row.value = std::abs(full[ip] - comp[ip]);
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

ConvergenceTable run_exponential_convergence(const Scenario& sc) {
  for (double t : sc.t_values)
    if (std::abs(t) > sc.T)
      throw ValidationError(
          "run_exponential_convergence: t_values must lie in [-T, T]");
  const PerturbationPair pair = build_pair(sc);
  const SpectralDecomposition dh = eigendecompose(pair.h());
  const SpectralDecomposition d0 = eigendecompose(pair.h0());

  // exp(i 0 A) == I identically, so the t = 0 expression vanishes exactly.
  std::vector<Complex> full(sc.t_values.size());
  for (std::size_t it = 0; it < sc.t_values.size(); ++it) {
    const double t = sc.t_values[it];
    if (t == 0.0) continue;
    const FunctionSpec et = FunctionSpec::exponential(t);
    full[it] = (apply_function(dh, et) - apply_function(d0, et) -
                doi_divided_difference(d0, d0, et, pair.v().entries()))
                   .trace();
  }

  ConvergenceTable table;
  table.provenance = scenario_hash(sc);
  for (std::size_t step = 0; step < sc.epsilon_schedule.size(); ++step) {
    const ProjectionBasis p = scheduled_projection(sc, pair, step);
    std::optional<PerturbationPair> cpair;
    std::optional<SpectralDecomposition> cdh, cd0;
    if (p.rank() > 0) {
      cpair.emplace(compress(pair.h0(), p), compress(pair.v(), p));
      cdh.emplace(eigendecompose(cpair->h()));
      cd0.emplace(eigendecompose(cpair->h0()));
    }
    double max_gap = 0.0;
    for (std::size_t it = 0; it < sc.t_values.size(); ++it) {
      const double t = sc.t_values[it];
      const FunctionSpec et = FunctionSpec::exponential(t);
      const Complex comp =
          (cpair && t != 0.0)
              ? (apply_function(*cdh, et) - apply_function(*cd0, et) -
                 doi_divided_difference(*cd0, *cd0, et, cpair->v().entries()))
                    .trace()
              : Complex{0.0, 0.0};
      ConvergenceRow row;
      row.step_index = static_cast<int>(step);
      row.epsilon = sc.epsilon_schedule[step];
      row.rank = p.rank();
      std::ostringstream name;
      name << "exp_t" << sc.t_values[it];
      row.quantity = name.str();
      row.lhs = full[it];
      row.rhs = comp;
      row.value = std::abs(full[it] - comp);
      max_gap = std::max(max_gap, row.value);
      table.rows.push_back(std::move(row));
    }
    ConvergenceRow row;
    row.step_index = static_cast<int>(step);
    row.epsilon = sc.epsilon_schedule[step];
    row.rank = p.rank();
    row.quantity = "exp_max_over_t";
    row.lhs = Complex{max_gap, 0.0};
    row.rhs = Complex{0.0, 0.0};
    row.value = max_gap;
    table.rows.push_back(std::move(row));
  }
  return table;
}

ConvergenceTable run_eta_cauchy(const Scenario& sc) {
  if (sc.epsilon_schedule.size() < 2)
    throw ValidationError("run_eta_cauchy: schedule needs at least 2 steps");
  const PerturbationPair pair = build_pair(sc);
  const double v_hs = pair.hs_norm_v();

  struct Step {
    ProjectionBasis basis;
    PiecewiseConstantFunction eta;
    double offdiag_h0 = 0.0;   // ||(I-P)H0 P||_2
    double offdiag_vp = 0.0;   // ||(I-P)V P||_2
    Matrix v_compressed_full;  // P V P on the ambient space
    double compressed_hs = 0.0;
  };
  std::vector<Step> steps;
  steps.reserve(sc.epsilon_schedule.size());

  ConvergenceTable table;
  table.provenance = scenario_hash(sc);
  for (std::size_t step = 0; step < sc.epsilon_schedule.size(); ++step) {
    ProjectionBasis p = scheduled_projection(sc, pair, step);
    PiecewiseConstantFunction eta = PiecewiseConstantFunction::zero(0.0, 0.0);
    double compressed_hs = 0.0;
    if (p.rank() > 0) {
      const PerturbationPair cpair(compress(pair.h0(), p),
                                   compress(pair.v(), p));
      eta = koplienko_eta(cpair, sc.s_nodes);
      compressed_hs = cpair.hs_norm_v();
    }
    Step st{std::move(p), std::move(eta), 0.0, 0.0, Matrix{}, 0.0};
    st.offdiag_h0 = st.basis.diagnostics().offdiag_a;
    st.offdiag_vp = sandwiched_offdiag(pair.v().entries(), st.basis.frame());
    st.v_compressed_full = st.basis.projector() * pair.v().entries() *
                           st.basis.projector();
    st.compressed_hs = compressed_hs;

    ConvergenceRow norm_row;
    norm_row.step_index = static_cast<int>(step);
    norm_row.epsilon = sc.epsilon_schedule[step];
    norm_row.rank = st.basis.rank();
    norm_row.quantity = "eta_norm_identity";
    norm_row.lhs = Complex{st.eta.integral(), 0.0};
    norm_row.rhs = Complex{0.5 * st.compressed_hs * st.compressed_hs, 0.0};
    norm_row.value = rel_gap(norm_row.lhs, norm_row.rhs);
    table.rows.push_back(norm_row);

    steps.push_back(std::move(st));
  }

  for (std::size_t step = 0; step + 1 < steps.size(); ++step) {
    const Step& sn = steps[step];
    const Step& sm = steps[step + 1];
    const double diff = l1_distance(sn.eta, sm.eta);
    const double v_gap =
        (sn.v_compressed_full - sm.v_compressed_full).norm();
    // Constructive Cauchy bound, ||f||_inf = 1; the s integral is
    // carried out exactly (int_0^1 s ds = 1/2).
    const double bound =
        v_hs * (2.0 * (sn.offdiag_h0 + sm.offdiag_h0) +
                0.5 * (sn.offdiag_vp + sm.offdiag_vp) + 0.5 * v_gap);
    ConvergenceRow row;
    row.step_index = static_cast<int>(step);
    row.epsilon = sc.epsilon_schedule[step];
    row.rank = sn.basis.rank();
    std::ostringstream name;
    name << "eta_l1_cauchy_" << step << "_to_" << (step + 1);
    row.quantity = name.str();
    row.lhs = Complex{diff, 0.0};
    row.rhs = Complex{bound, 0.0};
    row.value = diff;
    table.rows.push_back(std::move(row));
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ConvergenceRow& a, const ConvergenceRow& b) {
                     return a.step_index < b.step_index;
                   });
  return table;
}

ConvergenceTable run_unbounded_demo(const Scenario& sc) {
  if (sc.h0_spec.kind != H0Spec::Kind::diagonal_formula)
    throw ValidationError(
        "run_unbounded_demo: h0_spec must be diagonal-formula");
  const int full_dim = sc.ambient_dim;
  std::vector<int> dims{std::max(2, full_dim / 4), std::max(3, full_dim / 2),
                        full_dim};
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());

  const SelfAdjointOperator v_full = build_v(sc, full_dim);

  ConvergenceTable table;
  table.provenance = scenario_hash(sc);
  for (std::size_t di = 0; di < dims.size(); ++di) {
    const int d = dims[di];
    const SelfAdjointOperator h0 = build_h0(sc, d);
    const SelfAdjointOperator v =
        make_self_adjoint(v_full.entries().topLeftCorner(d, d));
    const PerturbationPair pair(h0, v);

    Matrix tail_m = v_full.entries();
    tail_m.topLeftCorner(d, d).setZero();
    const double tail = tail_m.norm();

    const SpectralDecomposition dh = eigendecompose(pair.h());
    const SpectralDecomposition d0 = eigendecompose(pair.h0());
    const PiecewiseConstantFunction eta = koplienko_eta(pair, sc.s_nodes);

    auto push = [&](const std::string& quantity, Complex lhs, Complex rhs,
                    double value) {
      ConvergenceRow row;
      row.step_index = static_cast<int>(di);
      row.epsilon = 0.0;
      row.rank = d;
      row.quantity = quantity;
      row.lhs = lhs;
      row.rhs = rhs;
      row.value = value;
      table.rows.push_back(std::move(row));
    };

    for (double t : sc.t_values) {
      Complex lhs{0.0, 0.0};
      Complex rhs{0.0, 0.0};
      if (t != 0.0) {
        const FunctionSpec et = FunctionSpec::exponential(t);
        lhs = (apply_function(dh, et) - apply_function(d0, et) -
               doi_divided_difference(d0, d0, et, pair.v().entries()))
                  .trace();
        rhs = (kI * t) * (kI * t) * integrate_pcf(eta, et);
      }
      std::ostringstream name;
      name << "unbounded_exp_t" << t;
      push(name.str(), lhs, rhs, rel_gap(lhs, rhs));
    }
    for (const SchwartzSpec& ss : sc.schwartz_specs) {
      const FunctionSpec f =
          FunctionSpec::gaussian(ss.sigma, ss.t_max, ss.points);
      const Complex lhs =
          (apply_function(dh, f) - apply_function(d0, f) -
           doi_divided_difference(d0, d0, f, pair.v().entries()))
              .trace();
      Complex rhs{0.0, 0.0};
      for (const FourierSample& s : f.fourier_samples())
        rhs += s.weight * s.fhat * (kI * s.t) * (kI * s.t) *
               integrate_pcf(eta, FunctionSpec::exponential(s.t));
      std::ostringstream name;
      name << "unbounded_schwartz_sigma" << ss.sigma;
      push(name.str(), lhs, rhs, rel_gap(lhs, rhs));
    }
    const Complex norm_lhs{eta.integral(), 0.0};
    const Complex norm_rhs{0.5 * pair.hs_norm_v() * pair.hs_norm_v(), 0.0};
    push("unbounded_eta_norm", norm_lhs, norm_rhs,
         rel_gap(norm_lhs, norm_rhs));
    push("unbounded_v_tail", Complex{tail, 0.0}, Complex{0.0, 0.0}, tail);
  }
  return table;
}

}  // namespace ssflab
