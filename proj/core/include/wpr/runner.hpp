#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wpr/config.hpp"
#include "wpr/diagnostics.hpp"
#include "wpr/solver.hpp"

namespace wpr {

struct RunOptions {
  std::size_t workers = 0;  // 0 = worker_count()
  bool dump_noise = false;  // also write noise.bin
  std::size_t dump_paths = 0;  // write the first n particle paths
  bool quiet = false;       // suppress the stdout summary
};

// Full run plus artifact persistence into config.output_dir: field.csv,
// weights_summary.csv, report.json and manifest.json (artifact hashes,
// config hash, seed; wall-clock data lives only here). Artifacts other
// than the manifest are byte-identical for the same (config, seed).
SolveArtifacts run_solve(const ExperimentConfig& config,
                         const RunOptions& options = {});

// Solve, then rerun the finite-difference reference on the same noise
// realization; adds compare_fd.csv (per-slice L1 distance in the
// stationary measure) and returns the max over slices.
double run_compare_fd(const ExperimentConfig& config,
                      const RunOptions& options = {});

// Solve, then the full diagnostic battery; adds diagnostics.json and
// prints one table row per check.
DiagnosticsReport run_diagnose(const ExperimentConfig& config,
                               const RunOptions& options = {});

// Solves once per value of one config key. Point artifacts land in
// "<output_dir>/<key>=<value>/", summary rows in sweep.csv. Points run
// in parallel with single-threaded internals, so results do not depend
// on the worker count.
void run_sweep(const ExperimentConfig& base, const std::string& key,
               const std::vector<std::string>& values,
               const RunOptions& options = {});

}  // namespace wpr
