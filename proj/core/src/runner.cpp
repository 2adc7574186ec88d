#include "wpr/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "wpr/hash.hpp"
#include "wpr/oracle.hpp"
#include "wpr/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace wpr {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t resolve_workers(std::size_t requested) {
  return requested == 0 ? worker_count() : requested;
}

const char* interpolation_name(FieldInterpolation mode) {
  return mode == FieldInterpolation::Linear ? "linear" : "constant";
}

// Collects artifact names and content hashes while writing, so the
// manifest can describe every file it sits next to.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(const std::string& dir) : dir_(dir) {
    fs::create_directories(dir_);
  }

  const fs::path& dir() const { return dir_; }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("short write to " + path.string());
    entries_[name] = {{"fnv64", hex64(fnv1a(content))},
                      {"bytes", content.size()}};
  }

  // For files written by other code (binary dumps): hash what landed.
  void note(const std::string& name) {
    const fs::path path = dir_ / name;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read back " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    entries_[name] = {{"fnv64", hex64(fnv1a(content))},
                      {"bytes", content.size()}};
  }

  const json& entries() const { return entries_; }

 private:
  fs::path dir_;
  json entries_ = json::object();
};

std::string field_csv(const SolveArtifacts& a, const ExperimentConfig& config) {
  const auto& field = a.field;
  std::string out;
  out.reserve(field.n_slices() * field.n_bins() * 48);
  char head[256];
  std::snprintf(head, sizeof head,
                "# field estimate: N=%zu dt=%s T=%s bins=%zu channels=%zu "
                "interpolation=%s seed=%llu\n",
                config.n_particles, fmt17(config.dt).c_str(),
                fmt17(config.horizon).c_str(), field.n_bins(),
                config.n_channels, interpolation_name(field.interpolation()),
                static_cast<unsigned long long>(config.seed));
  out += head;
  out +=
      "# v_hat is the density of the measure-valued solution against the "
      "uniform stationary law\n";
  out += "t,bin_center,v_hat,occupancy\n";
  for (std::size_t k = 0; k < field.n_slices(); ++k) {
    const std::string t = fmt17(a.settings.dt * static_cast<double>(k));
    for (std::size_t j = 0; j < field.n_bins(); ++j) {
      out += t;
      out += ',';
      out += fmt17(field.bin_center(j));
      out += ',';
      out += fmt17(field.value(k, j));
      out += ',';
      out += std::to_string(field.occupancy(k, j));
      out += '\n';
    }
  }
  return out;
}

std::string weights_csv(const SolveArtifacts& a, const ExperimentConfig& config) {
  const std::size_t n = a.weights.size();
  const std::size_t n_steps = a.settings.n_steps;
  // Cumulative boundary resets per step, over all particles.
  std::vector<std::size_t> resets(n_steps + 1, 0);
  for (const auto& w : a.weights)
    for (std::uint32_t step : w.resets) ++resets[step];
  for (std::size_t k = 1; k <= n_steps; ++k) resets[k] += resets[k - 1];

  std::string out;
  char head[160];
  std::snprintf(head, sizeof head,
                "# weight summary per time slice: N=%zu dt=%s seed=%llu\n",
                config.n_particles, fmt17(config.dt).c_str(),
                static_cast<unsigned long long>(config.seed));
  out += head;
  out += "t,mean,sd,min,max,resets_cum\n";
  for (std::size_t k = 0; k <= n_steps; ++k) {
    double mean = 0, lo = a.weights[0].values[k], hi = lo;
    for (const auto& w : a.weights) {
      const double v = w.values[k];
      mean += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    mean /= static_cast<double>(n);
    double var = 0;
    for (const auto& w : a.weights) {
      const double d = w.values[k] - mean;
      var += d * d;
    }
    const double sd = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
    out += fmt17(a.settings.dt * static_cast<double>(k));
    out += ',';
    out += fmt17(mean);
    out += ',';
    out += fmt17(sd);
    out += ',';
    out += fmt17(lo);
    out += ',';
    out += fmt17(hi);
    out += ',';
    out += std::to_string(resets[k]);
    out += '\n';
  }
  return out;
}

std::string paths_csv(const SolveArtifacts& a, std::size_t n_dump) {
  const std::size_t n = std::min(n_dump, a.paths.size());
  std::string out;
  char head[96];
  std::snprintf(head, sizeof head, "# particle positions: first %zu of %zu\n",
                n, a.paths.size());
  out += head;
  out += "t";
  for (std::size_t i = 0; i < n; ++i) out += ",x" + std::to_string(i);
  out += '\n';
  for (std::size_t k = 0; k <= a.settings.n_steps; ++k) {
    out += fmt17(a.settings.dt * static_cast<double>(k));
    for (std::size_t i = 0; i < n; ++i) {
      out += ',';
      out += fmt17(a.paths[i].positions[k]);
    }
    out += '\n';
  }
  return out;
}

json report_json(const SolveArtifacts& a) {
  const IterationReport& r = a.report;
  json j;
  j["settings"] = {{"n_particles", a.settings.n_particles},
                   {"dt", a.settings.dt},
                   {"n_steps", a.settings.n_steps},
                   {"n_bins", a.settings.n_bins},
                   {"tol", a.settings.tol},
                   {"max_iter", a.settings.max_iter},
                   {"interpolation", interpolation_name(a.settings.interpolation)},
                   {"seed", a.settings.seed},
                   {"salt", a.settings.salt}};
  j["iteration"] = {{"deltas", r.deltas},
                    {"ratios", r.ratios},
                    {"iterations", r.iterations},
                    {"converged", r.converged},
                    {"randomness_frozen", r.randomness_frozen}};
  j["checksums"] = {{"noise", hex64(r.noise_checksum)},
                    {"positions", hex64(r.positions_checksum)},
                    {"field", hex64(a.field.checksum())},
                    {"weights", hex64(weights_checksum(a.weights))}};
  return j;
}

// Runs the solve and emits everything except report.json / manifest.json,
// which the caller finishes once it knows whether extra sections belong in
// the report.
struct SolveToDir {
  SolveArtifacts artifacts;
  ArtifactWriter writer;
  json report;
};

SolveToDir solve_to_dir(const ExperimentConfig& config,
                        const RunOptions& options) {
  config.validate();
  const std::size_t workers = resolve_workers(options.workers);
  SolveToDir out{solve(config.problem(), config.solver_settings(workers)),
                 ArtifactWriter(config.output_dir), json()};
  out.writer.write("field.csv", field_csv(out.artifacts, config));
  out.writer.write("weights_summary.csv", weights_csv(out.artifacts, config));
  if (options.dump_noise) {
    save_noise(out.artifacts.noise, (out.writer.dir() / "noise.bin").string());
    out.writer.note("noise.bin");
  }
  if (options.dump_paths > 0)
    out.writer.write("paths.csv", paths_csv(out.artifacts, options.dump_paths));
  out.report = report_json(out.artifacts);
  return out;
}

void finalize(SolveToDir& run, const ExperimentConfig& config,
              const RunOptions& options) {
  run.writer.write("report.json", run.report.dump(2) + "\n");
  json manifest;
  manifest["version"] = "0.1.0";
  manifest["created_unix"] = static_cast<std::int64_t>(std::time(nullptr));
  manifest["config_hash"] = hex64(config.hash());
  manifest["seed"] = config.seed;
  manifest["workers"] = resolve_workers(options.workers);
  manifest["timings_seconds"] = {
      {"simulate", run.artifacts.report.simulate_seconds},
      {"iterate", run.artifacts.report.iterate_seconds}};
  manifest["artifacts"] = run.writer.entries();
  run.writer.write("manifest.json", manifest.dump(2) + "\n");
}

void print_solve_summary(const SolveToDir& run, const ExperimentConfig& config) {
  const IterationReport& r = run.artifacts.report;
  std::printf(
      "solve: N=%zu steps=%zu bins=%zu iterations=%zu converged=%s "
      "final_delta=%.3g -> %s\n",
      config.n_particles, run.artifacts.settings.n_steps,
      run.artifacts.settings.n_bins, r.iterations,
      r.converged ? "yes" : "no",
      r.deltas.empty() ? 0.0 : r.deltas.back(), config.output_dir.c_str());
}

std::string sanitized_point_dir(const std::string& key,
                                const std::string& value) {
  std::string name = key + "=" + value;
  for (char& c : name)
    if (c == '/' || c == ',' || c == ' ') c = '_';
  return name;
}

}  // namespace

SolveArtifacts run_solve(const ExperimentConfig& config,
                         const RunOptions& options) {
  SolveToDir run = solve_to_dir(config, options);
  finalize(run, config, options);
  if (!options.quiet) print_solve_summary(run, config);
  return std::move(run.artifacts);
}

double run_compare_fd(const ExperimentConfig& config,
                      const RunOptions& options) {
  SolveToDir run = solve_to_dir(config, options);
  const SpdeProblem problem = config.problem();
  const GridSolution grid =
      fd_solve(problem, run.artifacts.noise, config.fd_points);

  std::string csv;
  char head[192];
  std::snprintf(head, sizeof head,
                "# particle field vs finite-difference reference: J=%zu "
                "substeps=%zu cfl_per_substep=%s\n",
                config.fd_points, grid.substeps, fmt17(grid.cfl).c_str());
  csv += head;
  csv += "t,l1_error\n";
  double max_err = 0;
  const std::size_t n_steps = run.artifacts.settings.n_steps;
  std::vector<double> errs(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    errs[k] = l1_pi_distance(run.artifacts.field, grid, k);
    max_err = std::max(max_err, errs[k]);
    csv += fmt17(run.artifacts.settings.dt * static_cast<double>(k));
    csv += ',';
    csv += fmt17(errs[k]);
    csv += '\n';
  }
  run.writer.write("compare_fd.csv", csv);
  run.report["compare_fd"] = {{"fd_points", config.fd_points},
                              {"substeps", grid.substeps},
                              {"cfl_per_substep", grid.cfl},
                              {"max_l1_error", max_err}};
  finalize(run, config, options);
  if (!options.quiet) {
    print_solve_summary(run, config);
    std::printf("compare-fd: J=%zu substeps=%zu max_l1_error=%.6g\n",
                config.fd_points, grid.substeps, max_err);
  }
  return max_err;
}

DiagnosticsReport run_diagnose(const ExperimentConfig& config,
                               const RunOptions& options) {
  SolveToDir run = solve_to_dir(config, options);
  const SpdeProblem problem = config.problem();
  DiagnosticsOptions diag_options;
  diag_options.with_dt_bias = config.store_increments;
  const DiagnosticsReport diag =
      run_diagnostics(problem, run.artifacts, diag_options);

  json j;
  j["all_passed"] = diag.all_passed();
  j["checks"] = json::array();
  for (const auto& c : diag.checks)
    j["checks"].push_back({{"name", c.name},
                           {"anchor", c.anchor},
                           {"value", c.value},
                           {"bound", std::isfinite(c.bound) ? json(c.bound) : json()},
                           {"pass", c.pass},
                           {"report_only", c.report_only},
                           {"detail", c.detail}});
  run.writer.write("diagnostics.json", j.dump(2) + "\n");
  run.report["diagnostics_passed"] = diag.all_passed();
  finalize(run, config, options);

  if (!options.quiet) {
    print_solve_summary(run, config);
    for (const auto& c : diag.checks) {
      const char* verdict =
          c.report_only ? "info" : (c.pass ? "PASS" : "FAIL");
      if (std::isfinite(c.bound))
        std::printf("%-38s %-4s value=%-12.5g bound=%-12.5g %s\n",
                    c.name.c_str(), verdict, c.value, c.bound,
                    c.detail.c_str());
      else
        std::printf("%-38s %-4s value=%-12.5g %s\n", c.name.c_str(), verdict,
                    c.value, c.detail.c_str());
    }
    std::printf("diagnostics: %s\n", diag.all_passed() ? "all gated checks passed"
                                                       : "gated check FAILED");
  }
  return diag;
}

void run_sweep(const ExperimentConfig& base, const std::string& key,
               const std::vector<std::string>& values,
               const RunOptions& options) {
  if (values.empty())
    throw ConfigError("sweep needs at least one value for " + key);
  // Validate every point before running any of them.
  std::vector<ExperimentConfig> points;
  points.reserve(values.size());
  for (const auto& value : values) {
    ExperimentConfig point = base;
    point.set(key, value);
    point.output_dir =
        (fs::path(base.output_dir) / sanitized_point_dir(key, value)).string();
    point.validate();
    points.push_back(std::move(point));
  }
  fs::create_directories(base.output_dir);

  struct Row {
    std::size_t iterations = 0;
    bool converged = false;
    double final_delta = 0;
    std::uint64_t field_checksum = 0;
  };
  std::vector<Row> rows(points.size());
  const std::size_t workers = resolve_workers(options.workers);
  parallel_for(points.size(), workers, [&](std::size_t i) {
    RunOptions point_options = options;
    point_options.workers = 1;  // parallel across points instead
    point_options.quiet = true;
    const SolveArtifacts artifacts = run_solve(points[i], point_options);
    rows[i] = {artifacts.report.iterations, artifacts.report.converged,
               artifacts.report.deltas.empty() ? 0.0
                                               : artifacts.report.deltas.back(),
               artifacts.field.checksum()};
  });

  std::string csv = "# sweep over " + key + "\n";
  csv += "key,value,iterations,converged,final_delta,field_checksum\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    csv += key + "," + values[i] + "," + std::to_string(rows[i].iterations) +
           "," + (rows[i].converged ? "1" : "0") + "," +
           fmt17(rows[i].final_delta) + "," + hex64(rows[i].field_checksum) +
           "\n";
    if (!options.quiet)
      std::printf("sweep %s=%s: iterations=%zu converged=%s final_delta=%.3g\n",
                  key.c_str(), values[i].c_str(), rows[i].iterations,
                  rows[i].converged ? "yes" : "no", rows[i].final_delta);
  }

  ArtifactWriter writer(base.output_dir);
  writer.write("sweep.csv", csv);
  json manifest;
  manifest["version"] = "0.1.0";
  manifest["created_unix"] = static_cast<std::int64_t>(std::time(nullptr));
  manifest["config_hash"] = hex64(base.hash());
  manifest["sweep_key"] = key;
  manifest["sweep_values"] = values;
  manifest["artifacts"] = writer.entries();
  writer.write("sweep_manifest.json", manifest.dump(2) + "\n");
}

}  // namespace wpr
