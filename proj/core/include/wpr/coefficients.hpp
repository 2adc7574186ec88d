#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "wpr/domain.hpp"

namespace wpr {

// Scalar coefficient on the domain, chosen by name with numeric
// parameters. Kept as tagged data (not type-erased callables) so specs
// round-trip through config files and evaluation stays a branch.
//
// Spec strings: "zero" | "const:<c>" | "linear:<a>:<b>" (a + b*x) |
// "sin:<amp>:<mode>" (amp * sin(mode*pi*(x-lower)/width)).
class ScalarField {
 public:
  enum class Kind { Zero, Constant, Linear, Sine };

  ScalarField() : kind_(Kind::Zero), a_(0), b_(0), c_(0) {}

  static ScalarField zero() { return ScalarField(); }
  static ScalarField constant(double c);
  static ScalarField linear(double a, double b);
  // amp * sin(mode*pi*(x - domain.lower())/domain.width())
  static ScalarField sine(double amp, int mode, const Domain& domain);

  // Parses a spec string; sine modes are anchored to the given domain.
  static ScalarField parse(const std::string& spec, const Domain& domain);

  double operator()(double x) const {
    switch (kind_) {
      case Kind::Zero: return 0.0;
      case Kind::Constant: return a_;
      case Kind::Linear: return a_ + b_ * x;
      case Kind::Sine: return a_ * std::sin(b_ * x + c_);
    }
    return 0.0;
  }

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  std::string spec() const;

 private:
  Kind kind_;
  double a_, b_, c_;
  int mode_ = 0;  // sine only, kept for spec round-trips
};

// Reaction factor G(v, x) multiplying the weight. Catalog:
// "zero" | "const:<c>" | "allen-cahn" (1 - v^2) | "phi4" (-v^2).
class Nonlinearity {
 public:
  enum class Kind { Zero, Constant, AllenCahn, Phi4 };

  Nonlinearity() : kind_(Kind::Zero), c_(0) {}

  static Nonlinearity zero() { return Nonlinearity(); }
  static Nonlinearity constant(double c);
  static Nonlinearity allen_cahn();
  static Nonlinearity phi4();
  static Nonlinearity parse(const std::string& spec);

  double operator()(double v, double /*x*/) const {
    switch (kind_) {
      case Kind::Zero: return 0.0;
      case Kind::Constant: return c_;
      case Kind::AllenCahn: return 1.0 - v * v;
      case Kind::Phi4: return -v * v;
    }
    return 0.0;
  }

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool depends_on_field() const {
    return kind_ == Kind::AllenCahn || kind_ == Kind::Phi4;
  }
  std::string spec() const;

 private:
  Kind kind_;
  double c_;
};

}  // namespace wpr
