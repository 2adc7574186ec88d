#include "wpr/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "wpr/hash.hpp"

namespace wpr {
namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" +
                      value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key +
                      "': expected a nonnegative integer, got '" + value + "'");
  }
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  return static_cast<std::size_t>(parse_u64(key, value));
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" +
                    value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string token;
  std::stringstream ss(value);
  while (std::getline(ss, token, ',')) {
    token = trim(token);
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::set<std::string> kRequiredKeys = {
    "domain.lower",        "domain.upper",          "domain.sigma",
    "problem.G",           "problem.g",             "problem.h",
    "problem.b",           "problem.rho",           "discretization.N",
    "discretization.dt",   "discretization.T",      "discretization.n_channels",
    "discretization.J",    "solver.tol",            "solver.max_iter",
    "seed",                "output_dir"};

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "domain.lower") domain_lower = parse_double(key, value);
  else if (key == "domain.upper") domain_upper = parse_double(key, value);
  else if (key == "domain.sigma") sigma = parse_double(key, value);
  else if (key == "problem.G") G_spec = value;
  else if (key == "problem.g") g_spec = value;
  else if (key == "problem.h") h_spec = value;
  else if (key == "problem.b") b_spec = value;
  else if (key == "problem.rho") rho_specs = split_list(value);
  else if (key == "discretization.N") n_particles = parse_size(key, value);
  else if (key == "discretization.dt") dt = parse_double(key, value);
  else if (key == "discretization.T") horizon = parse_double(key, value);
  else if (key == "discretization.n_bins") n_bins = parse_size(key, value);
  else if (key == "discretization.n_channels") n_channels = parse_size(key, value);
  else if (key == "discretization.J") fd_points = parse_size(key, value);
  else if (key == "discretization.fd_dt") fd_dt = parse_double(key, value);
  else if (key == "solver.tol") {
    tol = value == "inf" ? std::numeric_limits<double>::infinity()
                         : parse_double(key, value);
  } else if (key == "solver.max_iter") max_iter = parse_size(key, value);
  else if (key == "field.interpolation") {
    if (value == "constant") interpolation = FieldInterpolation::PiecewiseConstant;
    else if (value == "linear") interpolation = FieldInterpolation::Linear;
    else
      throw ConfigError("config key 'field.interpolation': expected "
                        "constant|linear, got '" + value + "'");
  } else if (key == "particles.store_increments") {
    store_increments = parse_bool(key, value);
  } else if (key == "seed") seed = parse_u64(key, value);
  else if (key == "output_dir") output_dir = value;
  else
    throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig ExperimentConfig::parse(std::istream& in,
                                         const std::string& origin) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": empty key or value");
    if (!seen.insert(key).second)
      throw ConfigError(origin + ": duplicate key '" + key + "'");
    cfg.set(key, value);
  }
  for (const auto& key : kRequiredKeys)
    if (!seen.count(key))
      throw ConfigError(origin + ": missing required key '" + key + "'");
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in, path);
}

void ExperimentConfig::validate() const {
  if (!(domain_upper > domain_lower))
    throw ConfigError("domain.upper must exceed domain.lower");
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw ConfigError("domain.sigma must be a finite nonnegative number");
  if (n_particles == 0) throw ConfigError("discretization.N must be >= 1");
  if (!(dt > 0.0)) throw ConfigError("discretization.dt must be positive");
  if (!(horizon > 0.0)) throw ConfigError("discretization.T must be positive");
  if (n_channels == 0)
    throw ConfigError("discretization.n_channels must be >= 1");
  if (rho_specs.empty())
    throw ConfigError("problem.rho must list at least one channel");
  if (rho_specs.size() != n_channels)
    throw ConfigError("problem.rho lists " + std::to_string(rho_specs.size()) +
                      " channels but discretization.n_channels = " +
                      std::to_string(n_channels));
  if (fd_points < 2) throw ConfigError("discretization.J must be >= 2");
  if (fd_dt >= 0.0 && fd_dt != dt)
    throw ConfigError(
        "discretization.fd_dt differs from discretization.dt; the noise "
        "coupling requires a shared time grid");
  if (!(tol > 0.0)) throw ConfigError("solver.tol must be positive");
  if (max_iter == 0) throw ConfigError("solver.max_iter must be >= 1");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");

  const double steps = horizon / dt;
  const double rounded = std::round(steps);
  if (rounded < 1.0 || std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps))
    throw ConfigError("discretization.T must be an integer multiple of dt");

  // Catalog validation happens here so bad specs fail at parse time.
  try {
    (void)problem();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

std::size_t ExperimentConfig::n_steps() const {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out << "domain.lower = " << fmt(domain_lower) << '\n'
      << "domain.upper = " << fmt(domain_upper) << '\n'
      << "domain.sigma = " << fmt(sigma) << '\n'
      << "problem.G = " << G_spec << '\n'
      << "problem.g = " << g_spec << '\n'
      << "problem.h = " << h_spec << '\n'
      << "problem.b = " << b_spec << '\n';
  out << "problem.rho = ";
  for (std::size_t i = 0; i < rho_specs.size(); ++i)
    out << (i ? "," : "") << rho_specs[i];
  out << '\n';
  out << "discretization.N = " << n_particles << '\n'
      << "discretization.dt = " << fmt(dt) << '\n'
      << "discretization.T = " << fmt(horizon) << '\n'
      << "discretization.n_bins = " << n_bins << '\n'
      << "discretization.n_channels = " << n_channels << '\n'
      << "discretization.J = " << fd_points << '\n'
      << "solver.tol = " << fmt(tol) << '\n'
      << "solver.max_iter = " << max_iter << '\n'
      << "field.interpolation = "
      << (interpolation == FieldInterpolation::Linear ? "linear" : "constant")
      << '\n'
      << "particles.store_increments = " << (store_increments ? "true" : "false")
      << '\n'
      << "seed = " << seed << '\n';
  return out.str();
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a(canonical()); }

Domain ExperimentConfig::domain() const {
  return Domain(domain_lower, domain_upper, sigma);
}

SpdeProblem ExperimentConfig::problem() const {
  Domain d = domain();
  std::vector<ScalarField> rho;
  rho.reserve(rho_specs.size());
  for (const auto& spec : rho_specs) rho.push_back(ScalarField::parse(spec, d));
  return SpdeProblem(d, ScalarField::parse(g_spec, d),
                     ScalarField::parse(h_spec, d),
                     ScalarField::parse(b_spec, d), Nonlinearity::parse(G_spec),
                     std::move(rho));
}

SolverSettings ExperimentConfig::solver_settings(std::size_t workers) const {
  SolverSettings s;
  s.n_particles = n_particles;
  s.dt = dt;
  s.n_steps = n_steps();
  s.n_bins = n_bins;
  s.tol = tol;
  s.max_iter = max_iter;
  s.interpolation = interpolation;
  s.retain_increments = store_increments;
  s.workers = workers;
  s.seed = seed;
  return s;
}

}  // namespace wpr
