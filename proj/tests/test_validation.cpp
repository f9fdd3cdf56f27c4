#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bernoulli/config.hpp"
#include "bernoulli/errors.hpp"
#include "bernoulli/validation.hpp"

using namespace bernoulli;
using namespace bernoulli::validation;

namespace {

config::ExperimentConfig load(const std::string& name) {
  return config::load_config(std::string(BERNOULLI_CONFIG_DIR) + "/" + name + ".conf");
}

}  // namespace

TEST_CASE("central difference is exact on a quadratic") {
  const auto f = [](const std::vector<double>& x) { return 3 * x[0] * x[0] - 2 * x[0] * x[1] + 0.5 * x[1] + 7; };
  const auto g = central_difference(f, {1.5, -0.25}, 1e-3);
  CHECK(std::abs(g[0] - (6 * 1.5 + 0.5)) <= 1e-10);
  CHECK(std::abs(g[1] - (-3.0 + 0.5)) <= 1e-10);
}

TEST_CASE("central difference error falls as h squared") {
  const auto f = [](const std::vector<double>& x) { return std::exp(x[0]); };
  const double e1 = std::abs(central_difference(f, {0.3}, 1e-2)[0] - std::exp(0.3));
  const double e2 = std::abs(central_difference(f, {0.3}, 5e-3)[0] - std::exp(0.3));
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("distance to the unit circle") {
  const auto e0 = exact_circle_error(FourierBoundary::circle(1.0, 2));
  CHECK(e0.mean_radius_dev == 0.0);
  CHECK(e0.max_radius_dev == 0.0);
  const auto e1 = exact_circle_error(FourierBoundary({1.0, 0.0}, {0.01}));
  CHECK(e1.max_radius_dev == doctest::Approx(0.01).epsilon(1e-12));
  // Mean of |sin| is 2/pi.
  CHECK(e1.mean_radius_dev == doctest::Approx(0.02 / 3.14159265358979323846).epsilon(1e-6));
  const auto e2 = exact_circle_error(FourierBoundary::circle(1.05));
  CHECK(e2.mean_radius_dev == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("perturbed boundary") {
  const FourierBoundary b({1.0, 0.1}, {0.2});
  const auto c = perturbed(b, {shape::ModeKind::Cos, 1}, 0.05);
  CHECK(c.a()[1] == doctest::Approx(0.15));
  const auto s = perturbed(b, {shape::ModeKind::Sin, 3}, 0.05);
  CHECK(s.order() == 3);
  CHECK(s.b()[2] == 0.05);
  CHECK(s.b()[0] == 0.2);
  CHECK_THROWS(perturbed(b, {shape::ModeKind::Sin, 0}, 0.1));
}

TEST_CASE("fd parameters") {
  CHECK_NOTHROW(validate(FdParams{}));
  CHECK_THROWS_AS(validate(FdParams{0.0, FdMode::Morph}), ConfigError);
  CHECK_THROWS_AS(validate(FdParams{0.5, FdMode::Remesh}), ConfigError);
}

TEST_CASE("shape line shares connectivity in morph mode") {
  const auto cfg = load("experiment3_20_50");
  const ShapeLine line(cfg.problem, cfg.initial_boundary(), cfg.mesh, FdMode::Morph);
  CHECK(line({shape::ModeKind::Cos, 0}, 0.0) == line.base().J);
  // Symmetric differences in both modes agree for the radius mode.
  const ShapeLine remesh(cfg.problem, cfg.initial_boundary(), cfg.mesh, FdMode::Remesh);
  const double h = 1e-3;
  const shape::VelocityMode m{shape::ModeKind::Cos, 0};
  const double dm = (line(m, h) - line(m, -h)) / (2 * h);
  const double dr = (remesh(m, h) - remesh(m, -h)) / (2 * h);
  CHECK(dm == doctest::Approx(dr).epsilon(0.05));
}

TEST_CASE("richardson check of the morph difference") {
  // The quotient at h and h/2 differ by O(h^2); the extrapolated value sits
  // close to both.
  const auto cfg = load("experiment3_20_50");
  const ShapeLine line(cfg.problem, cfg.initial_boundary(), cfg.mesh, FdMode::Morph);
  const shape::VelocityMode m{shape::ModeKind::Sin, 1};
  auto dq = [&](double h) { return (line(m, h) - line(m, -h)) / (2 * h); };
  const double d1 = dq(1e-2), d2 = dq(5e-3);
  const double extrapolated = (4 * d2 - d1) / 3;
  CHECK(std::abs(d2 - extrapolated) <= 1e-3 * std::abs(extrapolated));
}

TEST_CASE("hessian probe is positive at the optimum") {
  const auto cfg = load("experiment3_20_50");
  const auto at = FourierBoundary::circle(1.0, 2);
  for (shape::VelocityMode m : {shape::VelocityMode{shape::ModeKind::Cos, 0}, shape::VelocityMode{shape::ModeKind::Cos, 2}}) {
    CHECK(hessian_probe(cfg.problem, at, cfg.mesh, m) > 0.0);
  }
  CHECK_THROWS_AS(hessian_probe(cfg.problem, at, cfg.mesh, {shape::ModeKind::Cos, 0}, 2.0), ConfigError);
}

TEST_CASE("reports") {
  std::ostringstream g;
  write_gradient_report(g, {{0, 1.0, 1.01}, {1, 0.0, 0.0}});
  CHECK(g.str().rfind("component,analytic,fd,rel_diff\n", 0) == 0);
  CHECK(g.str().find("\n1,0,0,0\n") != std::string::npos);
  std::ostringstream h;
  write_hessian_report(h, {{{shape::ModeKind::Sin, 2}, 3.5}});
  CHECK(h.str() == "mode,value\nSIN(2),3.5\n");
}
