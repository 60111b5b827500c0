// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: scenario in, CSV/plot-data out. The subcommands
// mirror the library operations; see README.md for the scenario format.

#include <CLI11.hpp>

#include "ssflab/outputs.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spectral shift function laboratory"};
  app.require_subcommand(1);

  ssflab::RunConfig cfg;
  double tolerance = 0.0;
  int s_nodes = 0;

  const std::vector<std::string> names = {
      "verify-poly", "verify-exp", "verify-schwartz", "eta",
      "xi",          "wvn",        "converge"};
  const std::vector<std::string> blurbs = {
      "polynomial trace formula against the eta integral",
      "exponential trace formula against the eta integral",
      "schwartz-class trace formula against the eta integral",
      "construct eta, check norm/positivity/support, write eta.dat",
      "construct the first-order counting function, write xi.dat",
      "Weyl-von Neumann projection diagnostics over the epsilon schedule",
      "compressed-trace convergence, eta Cauchy gaps, unbounded emulation"};

  for (std::size_t i = 0; i < names.size(); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
    sub->add_option("--scenario", cfg.scenario_path, "scenario file")
        ->required();
    sub->add_option("--out", cfg.output_dir, "output directory")->required();
    sub->add_option("--snodes", s_nodes, "override s_nodes");
    sub->add_option("--tolerance", tolerance, "override row tolerances");
    sub->add_flag("--quiet", cfg.quiet, "suppress per-check console lines");
    sub->add_flag("--timing", cfg.timing,
                  "record wall times in results.csv (breaks byte-level "
                  "reproducibility of reruns)");
    sub->callback([&, i] {
      cfg.subcommand = names[i];
      if (s_nodes > 0) cfg.s_nodes_override = s_nodes;
      if (tolerance > 0) cfg.tolerance_override = tolerance;
    });
  }

  CLI11_PARSE(app, argc, argv);
  return ssflab::dispatch(cfg);
}
