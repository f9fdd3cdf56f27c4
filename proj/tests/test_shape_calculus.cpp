#include <doctest.h>

#include <cmath>

#include "bernoulli/config.hpp"
#include "bernoulli/errors.hpp"
#include "bernoulli/shape_calculus.hpp"
#include "bernoulli/validation.hpp"

using namespace bernoulli;
using namespace bernoulli::shape;

namespace {

config::ExperimentConfig load(const std::string& name) {
  return config::load_config(std::string(BERNOULLI_CONFIG_DIR) + "/" + name + ".conf");
}

fem::ScalarField combine(double a, const fem::ScalarField& x, double b, const fem::ScalarField& y) {
  fem::ScalarField r{x.mesh, x.values};
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = a * x.values[i] + b * y.values[i];
  return r;
}

}  // namespace

TEST_CASE("initial objective of the L-shaped example") {
  const auto cfg = load("experiment1_N3");
  const auto eval = evaluate(cfg.problem, cfg.initial_boundary(), cfg.mesh);
  CHECK(eval.J == doctest::Approx(4.60377).epsilon(0.10));
  CHECK(eval.J >= 0.0);
  CHECK(eval.flux.size() == eval.disc->gamma_nodes().size());
}

TEST_CASE("initial objective of the annulus example") {
  const auto cfg = load("experiment3_20_50");
  const auto eval = evaluate(cfg.problem, cfg.initial_boundary(), cfg.mesh);
  CHECK(eval.J == doctest::Approx(4.16158).epsilon(0.10));
}

TEST_CASE("objective is tiny at the exact optimum and positive elsewhere") {
  const auto cfg = load("experiment3_40_100");
  const double at_circle = evaluate(cfg.problem, FourierBoundary::circle(1.0, 1), cfg.mesh).J;
  CHECK(at_circle >= 0.0);
  CHECK(at_circle <= 1e-4);
  for (double a0 : {0.8, 1.2}) CHECK(evaluate(cfg.problem, FourierBoundary::circle(a0, 1), cfg.mesh).J > 100 * at_circle);
}

TEST_CASE("mode names and ordering") {
  const auto modes = gradient_modes(2);
  REQUIRE(modes.size() == 5);
  CHECK(to_string(modes[0]) == "COS(0)");
  CHECK(to_string(modes[2]) == "COS(2)");
  CHECK(to_string(modes[3]) == "SIN(1)");
  CHECK(to_string(modes[4]) == "SIN(2)");
}

TEST_CASE("velocity extension has the prescribed trace") {
  const auto cfg = load("experiment3_20_50");
  const auto eval = evaluate(cfg.problem, cfg.initial_boundary(), cfg.mesh);
  const auto& disc = *eval.disc;
  for (VelocityMode mode : {VelocityMode{ModeKind::Cos, 0}, VelocityMode{ModeKind::Cos, 2}, VelocityMode{ModeKind::Sin, 3}}) {
    const auto W = extend_velocity(disc, mode);
    for (int i : disc.gamma_nodes()) {
      const Point2 p = disc.mesh().nodes[i];
      const double th = polar_angle(p);
      const double t = mode.kind == ModeKind::Cos ? std::cos(mode.index * th) : std::sin(mode.index * th);
      CHECK(W.x[i] == doctest::Approx(t * std::cos(th)).epsilon(1e-12));
      CHECK(W.y[i] == doctest::Approx(t * std::sin(th)).epsilon(1e-12));
    }
    for (int i : disc.sigma_nodes()) {
      CHECK(W.x[i] == 0.0);
      CHECK(W.y[i] == 0.0);
    }
  }
}

TEST_CASE("euler derivative is linear in the velocity") {
  const auto cfg = load("experiment1_N3");
  const auto eval = evaluate(cfg.problem, cfg.initial_boundary(), cfg.mesh);
  const auto p = solve_adjoint(eval);
  const auto W1 = extend_velocity(*eval.disc, {ModeKind::Cos, 1});
  const auto W2 = extend_velocity(*eval.disc, {ModeKind::Sin, 2});
  const double d1 = euler_derivative(eval, p, W1, cfg.problem);
  const double d2 = euler_derivative(eval, p, W2, cfg.problem);
  const fem::VectorField mix{combine(0.7, W1.x, -1.9, W2.x), combine(0.7, W1.y, -1.9, W2.y)};
  const double dm = euler_derivative(eval, p, mix, cfg.problem);
  CHECK(dm == doctest::Approx(0.7 * d1 - 1.9 * d2).epsilon(1e-10));
}

TEST_CASE("zero adjoint gives a zero derivative") {
  const auto cfg = load("experiment1_N3");
  const auto eval = evaluate(cfg.problem, cfg.initial_boundary(), cfg.mesh);
  fem::ScalarField p{eval.u.mesh, std::vector<double>(eval.u.values.size(), 0.0)};
  const auto W = extend_velocity(*eval.disc, {ModeKind::Cos, 0});
  CHECK(euler_derivative(eval, p, W, cfg.problem) == 0.0);
}

TEST_CASE("adjoint data") {
  const auto cfg = load("experiment3_20_50");
  const auto eval = evaluate(cfg.problem, cfg.initial_boundary(), cfg.mesh);
  const auto p = solve_adjoint(eval);
  const auto& disc = *eval.disc;
  for (std::size_t k = 0; k < disc.gamma_nodes().size(); ++k) CHECK(p[disc.gamma_nodes()[k]] == eval.flux[k]);
  for (int i : disc.sigma_nodes()) CHECK(p[i] == 0.0);
}

TEST_CASE("gradient has 2N+1 components and matches finite differences") {
  const auto cfg = load("experiment3_40_100");
  const auto boundary = cfg.initial_boundary();
  const auto vg = value_and_gradient(cfg.problem, boundary, cfg.mesh);
  REQUIRE(vg.gradient.size() == 3);
  const auto fd = validation::fd_gradient(cfg.problem, boundary, cfg.mesh);
  for (std::size_t i = 0; i < fd.size(); ++i) {
    CAPTURE(i);
    CHECK(vg.gradient[i] == doctest::Approx(fd[i]).epsilon(0.02));
  }
  CHECK(gradient(cfg.problem, boundary, cfg.mesh) == vg.gradient);
}

TEST_CASE("rotating a radially symmetric problem rotates the gradient") {
  // Rotation by a multiple of both sample spacings maps the discrete problem
  // onto itself.
  const auto cfg = load("experiment3_20_50");
  const double phi = kTwoPi / 10.0;
  const double a0 = 0.9, a1 = 0.06, b1 = 0.0;
  const FourierBoundary base({a0, a1}, {b1});
  const FourierBoundary rotated({a0, a1 * std::cos(phi)}, {a1 * std::sin(phi)});
  const auto g0 = value_and_gradient(cfg.problem, base, cfg.mesh);
  const auto g1 = value_and_gradient(cfg.problem, rotated, cfg.mesh);
  CHECK(g1.eval.J == doctest::Approx(g0.eval.J).epsilon(0.01));
  CHECK(g1.gradient[0] == doctest::Approx(g0.gradient[0]).epsilon(0.01));
  const double ca = std::cos(phi) * g0.gradient[1] - std::sin(phi) * g0.gradient[2];
  const double sb = std::sin(phi) * g0.gradient[1] + std::cos(phi) * g0.gradient[2];
  const double scale = std::hypot(g0.gradient[1], g0.gradient[2]);
  CHECK(std::abs(g1.gradient[1] - ca) <= 0.01 * scale);
  CHECK(std::abs(g1.gradient[2] - sb) <= 0.01 * scale);
}

TEST_CASE("inadmissible shapes are rejected") {
  const auto cfg = load("experiment3_20_50");
  CHECK_THROWS_AS(evaluate(cfg.problem, FourierBoundary::circle(0.2, 1), cfg.mesh), InfeasibleShape);
  CHECK_THROWS_AS(evaluate(cfg.problem, FourierBoundary({0.3, 0.5}, {0.0}), cfg.mesh), InfeasibleShape);
  MeshParams few = cfg.mesh;
  few.cnt_gamma = 4;
  CHECK_THROWS(evaluate(cfg.problem, FourierBoundary::circle(1.0, 1), few));
}

TEST_CASE("target edge length follows the free boundary spacing") {
  const auto gamma = sample_polyline(FourierBoundary::circle(1.0), 100);
  MeshParams p;
  p.cnt_gamma = 100;
  CHECK(target_edge_length(gamma, p) == doctest::Approx(perimeter(gamma) / 100).epsilon(1e-14));
  p.edge_factor = 2.0;
  CHECK(target_edge_length(gamma, p) == doctest::Approx(2 * perimeter(gamma) / 100).epsilon(1e-14));
  p.target_edge_length = 0.05;
  CHECK(target_edge_length(gamma, p) == 0.05);
}
