#pragma once

#include <string>
#include <vector>

#include "sticky1d/dynamics.hpp"
#include "sticky1d/forces.hpp"
#include "sticky1d/measures.hpp"

namespace sticky {

enum class RunMode { Entropic, Projected, Both };

std::string to_string(RunMode mode);

// A fully resolved run description: force model, initial particles, time
// grid, and an optional reference solution to compare against.
struct Scenario {
  std::string name;
  std::string description;
  ForceModel model;
  ParticleSeed seed;
  double t_end = 1.0;
  std::vector<double> sample_times;  // sorted, deduplicated, within [0, t_end]
  RunMode mode = RunMode::Entropic;

  // One of "", "two_particle", "bgsw", "confined_linear", "dirac_riemann",
  // "steady_state".  Empty means no reference comparison.
  std::string oracle;
  double oracle_tol = 0.0;  // resolved to a per-oracle default at load time

  // Recorded for the "dirac" initial profile (used by the riemann oracle).
  double dirac_x0 = 0.0;
  double dirac_v0 = 0.0;
};

// Parse a scenario config file.  The format is flat "key = value" lines under
// [force] / [initial] / [run] / [output] section headers, with '#' or ';'
// comments; "name" and "description" may appear before the first section.
// Errors are reported as std::runtime_error with "path:line: message".
Scenario load_scenario(const std::string& path);

struct ScenarioRun {
  // Final sample grid: the scenario's sample times merged with every event
  // time the run produced, so state at each event instant is always recorded.
  std::vector<double> times;
  SimResult entropic;               // populated unless mode == Projected
  std::vector<Snapshot> projected;  // populated unless mode == Entropic
  bool ran_entropic = false;
  bool ran_projected = false;
};

// Run the scenario per its mode.  The entropic run is performed first with
// the scenario's own sample times; if it produced events at instants not in
// that grid, it is re-run once on the merged grid so snapshots exist at every
// event time.  The projected run uses the same final grid.
ScenarioRun run_scenario(const Scenario& sc);

struct OracleReport {
  std::vector<double> per_sample;  // one distance per compared snapshot
  // The value judged against tol: the max over samples, except for the
  // steady_state oracle where only the final sample is judged.
  double worst = 0.0;
  double tol = 0.0;
  bool pass = true;
};

// Compare entropic-run snapshots against the scenario's reference solution.
// Requires sc.oracle to be non-empty and the snapshots to come from the
// scenario's own seed (masses are taken from sc.seed).
OracleReport compare_oracle(const Scenario& sc,
                            const std::vector<Snapshot>& snapshots);

}  // namespace sticky
