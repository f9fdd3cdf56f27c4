#include "bernoulli/functions.hpp"

#include <cmath>
#include <sstream>

#include "bernoulli/errors.hpp"
#include "text_util.hpp"

namespace bernoulli {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double parse_number(const std::string& word, std::string_view context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(word, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != word.size()) {
    throw ConfigError("bad number '" + word + "' in function '" + std::string(context) + "'");
  }
  return v;
}

}  // namespace

ScalarFunction ScalarFunction::parse(std::string_view text) {
  std::istringstream in{std::string(detail::trim(text))};
  std::string kind;
  in >> kind;
  std::vector<std::string> args;
  for (std::string w; in >> w;) args.push_back(w);

  if (kind == "const") {
    if (args.size() != 1) throw ConfigError("'const' takes one value: " + std::string(text));
    return ConstantFn{parse_number(args[0], text)};
  }
  if (kind == "logdist") {
    if (args.size() != 3) throw ConfigError("'logdist' takes C x0 y0: " + std::string(text));
    return LogDistanceFn{parse_number(args[0], text),
                         {parse_number(args[1], text), parse_number(args[2], text)}};
  }
  if (kind == "poly") {
    if (args.empty()) throw ConfigError("'poly' needs at least one term: " + std::string(text));
    PolynomialFn poly;
    for (const std::string& term : args) {
      const auto c1 = term.find(':');
      const auto c2 = term.find(':', c1 == std::string::npos ? c1 : c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos) {
        throw ConfigError("polynomial term must be coeff:i:j, got '" + term + "'");
      }
      const double px = parse_number(term.substr(c1 + 1, c2 - c1 - 1), text);
      const double py = parse_number(term.substr(c2 + 1), text);
      if (px < 0 || py < 0 || px != std::floor(px) || py != std::floor(py)) {
        throw ConfigError("polynomial exponents must be non-negative integers: '" + term + "'");
      }
      poly.terms.push_back({parse_number(term.substr(0, c1), text), static_cast<int>(px),
                            static_cast<int>(py)});
    }
    return poly;
  }
  throw ConfigError("unknown function kind '" + kind + "'");
}

std::string ScalarFunction::to_string() const {
  return std::visit(overloaded{
                        [](const ConstantFn& f) { return "const " + detail::format_real(f.c); },
                        [](const LogDistanceFn& f) {
                          return "logdist " + detail::format_real(f.scale) + " " +
                                 detail::format_real(f.center.x) + " " +
                                 detail::format_real(f.center.y);
                        },
                        [](const PolynomialFn& f) {
                          std::string s = "poly";
                          for (const auto& t : f.terms) {
                            s += " " + detail::format_real(t.coeff) + ":" + std::to_string(t.px) +
                                 ":" + std::to_string(t.py);
                          }
                          return s;
                        },
                    },
                    fn_);
}

double ScalarFunction::value(Point2 p) const {
  return std::visit(overloaded{
                        [](const ConstantFn& f) { return f.c; },
                        [p](const LogDistanceFn& f) {
                          return -0.5 * f.scale * std::log(norm2(p - f.center));
                        },
                        [p](const PolynomialFn& f) {
                          double s = 0.0;
                          for (const auto& t : f.terms) s += t.coeff * ipow(p.x, t.px) * ipow(p.y, t.py);
                          return s;
                        },
                    },
                    fn_);
}

Vec2 ScalarFunction::gradient(Point2 p) const {
  return std::visit(overloaded{
                        [](const ConstantFn&) { return Vec2{0.0, 0.0}; },
                        [p](const LogDistanceFn& f) {
                          const Vec2 d = p - f.center;
                          const double s = -f.scale / norm2(d);
                          return Vec2{s * d.x, s * d.y};
                        },
                        [p](const PolynomialFn& f) {
                          Vec2 g{0.0, 0.0};
                          for (const auto& t : f.terms) {
                            if (t.px > 0) g.x += t.coeff * t.px * ipow(p.x, t.px - 1) * ipow(p.y, t.py);
                            if (t.py > 0) g.y += t.coeff * t.py * ipow(p.x, t.px) * ipow(p.y, t.py - 1);
                          }
                          return g;
                        },
                    },
                    fn_);
}

bool ScalarFunction::is_zero() const {
  if (const auto* c = std::get_if<ConstantFn>(&fn_)) return c->c == 0.0;
  if (const auto* poly = std::get_if<PolynomialFn>(&fn_)) {
    for (const auto& t : poly->terms) {
      if (t.coeff != 0.0) return false;
    }
    return true;
  }
  return false;
}

}  // namespace bernoulli
