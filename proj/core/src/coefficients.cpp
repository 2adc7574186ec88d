#include "wpr/coefficients.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace wpr {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double to_number(const std::string& tok, const std::string& spec) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("coefficient spec '" + spec +
                                "': bad numeric parameter '" + tok + "'");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ScalarField ScalarField::constant(double c) {
  ScalarField f;
  f.kind_ = Kind::Constant;
  f.a_ = c;
  return f;
}

ScalarField ScalarField::linear(double a, double b) {
  ScalarField f;
  f.kind_ = Kind::Linear;
  f.a_ = a;
  f.b_ = b;
  return f;
}

ScalarField ScalarField::sine(double amp, int mode, const Domain& domain) {
  if (mode < 1) throw std::invalid_argument("sine coefficient: mode must be >= 1");
  ScalarField f;
  f.kind_ = Kind::Sine;
  f.a_ = amp;
  f.b_ = static_cast<double>(mode) * std::numbers::pi / domain.width();
  f.c_ = -f.b_ * domain.lower();
  f.mode_ = mode;
  return f;
}

ScalarField ScalarField::parse(const std::string& spec, const Domain& domain) {
  auto parts = split(spec, ':');
  const std::string& name = parts[0];
  auto arity = [&](std::size_t n) {
    if (parts.size() != n + 1)
      throw std::invalid_argument("coefficient spec '" + spec +
                                  "': wrong number of parameters");
  };
  if (name == "zero") {
    arity(0);
    return zero();
  }
  if (name == "const") {
    arity(1);
    return constant(to_number(parts[1], spec));
  }
  if (name == "linear") {
    arity(2);
    return linear(to_number(parts[1], spec), to_number(parts[2], spec));
  }
  if (name == "sin") {
    arity(2);
    double amp = to_number(parts[1], spec);
    double mode = to_number(parts[2], spec);
    if (mode != std::floor(mode) || mode < 1.0)
      throw std::invalid_argument("coefficient spec '" + spec +
                                  "': mode must be a positive integer");
    return sine(amp, static_cast<int>(mode), domain);
  }
  throw std::invalid_argument("unknown coefficient '" + name +
                              "' (catalog: zero, const, linear, sin)");
}

std::string ScalarField::spec() const {
  switch (kind_) {
    case Kind::Zero: return "zero";
    case Kind::Constant: return "const:" + fmt(a_);
    case Kind::Linear: return "linear:" + fmt(a_) + ":" + fmt(b_);
    case Kind::Sine:
      return "sin:" + fmt(a_) + ":" + std::to_string(mode_);
  }
  return "zero";
}

Nonlinearity Nonlinearity::constant(double c) {
  Nonlinearity g;
  g.kind_ = Kind::Constant;
  g.c_ = c;
  return g;
}

Nonlinearity Nonlinearity::allen_cahn() {
  Nonlinearity g;
  g.kind_ = Kind::AllenCahn;
  return g;
}

Nonlinearity Nonlinearity::phi4() {
  Nonlinearity g;
  g.kind_ = Kind::Phi4;
  return g;
}

Nonlinearity Nonlinearity::parse(const std::string& spec) {
  auto parts = split(spec, ':');
  const std::string& name = parts[0];
  if (name == "zero" && parts.size() == 1) return zero();
  if (name == "allen-cahn" && parts.size() == 1) return allen_cahn();
  if (name == "phi4" && parts.size() == 1) return phi4();
  if (name == "const" && parts.size() == 2)
    return constant(to_number(parts[1], spec));
  throw std::invalid_argument("unknown reaction '" + spec +
                              "' (catalog: zero, const:<c>, allen-cahn, phi4)");
}

std::string Nonlinearity::spec() const {
  switch (kind_) {
    case Kind::Zero: return "zero";
    case Kind::Constant: return "const:" + fmt(c_);
    case Kind::AllenCahn: return "allen-cahn";
    case Kind::Phi4: return "phi4";
  }
  return "zero";
}

}  // namespace wpr
