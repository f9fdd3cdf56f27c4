#pragma once

// Closed-form data functions f, g, h with analytic gradients.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bernoulli/point.hpp"

namespace bernoulli {

struct ConstantFn {
  double c = 0.0;
};

// -C log sqrt((x-x0)^2 + (y-y0)^2)
struct LogDistanceFn {
  double scale = 1.0;
  Point2 center;
};

// sum_k c_k x^{i_k} y^{j_k}
struct PolynomialFn {
  struct Term {
    double coeff = 0.0;
    int px = 0;
    int py = 0;
  };
  std::vector<Term> terms;
};

class ScalarFunction {
 public:
  using Variant = std::variant<ConstantFn, LogDistanceFn, PolynomialFn>;

  ScalarFunction() : fn_(ConstantFn{0.0}) {}
  ScalarFunction(ConstantFn fn) : fn_(fn) {}
  ScalarFunction(LogDistanceFn fn) : fn_(fn) {}
  ScalarFunction(PolynomialFn fn) : fn_(std::move(fn)) {}

  static ScalarFunction constant(double c) { return ConstantFn{c}; }

  // Registry syntax:
  //   const <c>
  //   logdist <C> <x0> <y0>
  //   poly <c>:<i>:<j> [<c>:<i>:<j> ...]
  // Throws ConfigError.
  static ScalarFunction parse(std::string_view text);
  std::string to_string() const;

  double value(Point2 p) const;
  Vec2 gradient(Point2 p) const;
  bool is_zero() const;

  const Variant& variant() const { return fn_; }

 private:
  Variant fn_;
};

}  // namespace bernoulli
