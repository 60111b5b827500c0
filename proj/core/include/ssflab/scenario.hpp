// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SSFLAB_SCENARIO_HPP
#define SSFLAB_SCENARIO_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ssflab {

/// How H0 is generated: a seeded dense random Hermitian matrix scaled to a
/// target operator norm, the diagonal formula mu_k = c k^p, or the 1d path
/// Laplacian tridiag(-1, 2, -1).
struct H0Spec {
  enum class Kind { dense_random, diagonal_formula, lattice_laplacian };
  Kind kind = Kind::dense_random;
  double norm = 1.0;  // dense-random target operator norm
  double c = 1.0;     // diagonal-formula scale
  double p = 1.0;     // diagonal-formula exponent

  bool operator==(const H0Spec&) const = default;
};

/// How V is generated. decay < 1 gives entries (random-hs) or rank-r seed
/// vectors an exponential envelope decay^i, producing summable-square tails.
struct VSpec {
  enum class Kind { dense_random, random_hs, rank_r };
  Kind kind = Kind::dense_random;
  double hs_norm = 1.0;
  double decay = 1.0;
  int rank = 1;

  bool operator==(const VSpec&) const = default;
};

struct SchwartzSpec {
  double sigma = 1.0;
  double t_max = 12.0;
  int points = 256;

  bool operator==(const SchwartzSpec&) const = default;
};

/// Complete description of a reproducible experiment. Identical scenarios
/// (same seed included) produce bit-identical outputs.
struct Scenario {
  std::uint64_t seed = 1;
  int ambient_dim = 2;
  H0Spec h0_spec;
  VSpec v_spec;
  std::vector<double> epsilon_schedule;  // strictly decreasing
  double T = 10.0;
  std::vector<double> t_values;
  std::vector<std::vector<double>> polynomials;  // coefficients by power
  int s_nodes = 32;
  std::vector<SchwartzSpec> schwartz_specs;
  std::vector<std::int64_t> slice_counts;  // optional per-step n override
  std::int64_t n_cap = 0;                  // 0 means no cap
  int t_grid_points = 65;

  bool operator==(const Scenario&) const = default;
};

/// Reads the structured key-value scenario format (sections [h0], [v],
/// repeated [poly] and [schwartz]; '#' comments). Throws ParseError with
/// line/column for malformed text or unknown keys, ValidationError when a
/// scenario invariant fails.
Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(std::string_view text);

/// Canonical serialization; parse_scenario_text(serialize_scenario(sc)) == sc.
std::string serialize_scenario(const Scenario& sc);

/// Checks the documented invariants, throwing ValidationError.
void validate_scenario(const Scenario& sc);

/// FNV-1a 64-bit, used for scenario ids and the output manifest.
std::uint64_t fnv1a64(std::string_view bytes);

/// 16-digit hex id of the canonical serialization.
std::string scenario_hash(const Scenario& sc);

}  // namespace ssflab

#endif  // SSFLAB_SCENARIO_HPP
