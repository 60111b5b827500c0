// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SSFLAB_OUTPUTS_HPP
#define SSFLAB_OUTPUTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "ssflab/harness.hpp"
#include "ssflab/pcf.hpp"

namespace ssflab {

/// One line of results.csv. The column set is fixed: scenario_id, check,
/// param, lhs_re, lhs_im, rhs_re, rhs_im, abs_err, rel_err, runtime_ms.
/// For verification rows rel_err is the relative gap of the two sides; for
/// bound rows (wvn, converge) it holds the measured/threshold ratio, so the
/// pass condition is uniformly rel_err <= tolerance.
struct ResultRow {
  std::string scenario_id;
  std::string check;
  std::string param;
  Complex lhs{0.0, 0.0};
  Complex rhs{0.0, 0.0};
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tolerance = 0.0;  // not serialized; drives the exit code
  long runtime_ms = 0;
};

/// Everything a run wants persisted: rows plus named step functions written
/// as two-column .dat files.
struct RunResults {
  std::vector<ResultRow> rows;
  std::vector<std::pair<std::string, PiecewiseConstantFunction>> functions;
};

struct ManifestEntry {
  std::string filename;
  std::string hash;  // fnv1a64 hex of the file bytes
};

/// Writes results.csv, one .dat per named function, and manifest.txt into
/// output_dir. Refuses empty results. Returns the manifest.
std::vector<ManifestEntry> emit_outputs(const RunResults& results,
                                        const std::string& output_dir);

struct RunConfig {
  std::string scenario_path;
  std::string output_dir;
  std::string subcommand;  // verify-poly verify-exp verify-schwartz eta xi
                           // wvn converge
  std::optional<int> s_nodes_override;
  std::optional<double> tolerance_override;
  bool quiet = false;
  /// Off by default so rerunning a scenario reproduces identical bytes;
  /// measured wall times go to the console instead. With timing on, the
  /// runtime_ms column carries real measurements and byte-level determinism
  /// is deliberately given up.
  bool timing = false;
};

/// Runs the selected subcommand. Exit code 0 on success, 1 when at least one
/// rel_err exceeds its tolerance, 2 on input errors (bad scenario, missing
/// file, unknown subcommand).
int dispatch(const RunConfig& cfg);

/// Serialization helpers shared with the tests.
std::string format_csv(const std::vector<ResultRow>& rows);
std::string format_pcf(const PiecewiseConstantFunction& f);

}  // namespace ssflab

#endif  // SSFLAB_OUTPUTS_HPP
