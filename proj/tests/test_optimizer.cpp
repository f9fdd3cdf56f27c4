#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "bernoulli/errors.hpp"
#include "bernoulli/optimizer.hpp"

using namespace bernoulli;
using namespace bernoulli::opt;

namespace {

// F(x) = sum_i c_i (x_i - 1)^2
struct Quadratic {
  std::vector<double> c;
  double operator()(const Vector& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += c[i] * (x[i] - 1.0) * (x[i] - 1.0);
    return s;
  }
  Vector grad(const Vector& x) const {
    Vector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * c[i] * (x[i] - 1.0);
    return g;
  }
};

}  // namespace

TEST_CASE("descent converges on a convex quadratic") {
  const Quadratic q{{1.0, 3.0, 0.5}};
  DescentParams p;
  p.alpha0 = 0.05;
  p.epsilon = 1e-8;
  p.max_iters = 2000;
  const auto traj = descend([&](const Vector& x) { return q(x); }, [&](const Vector& x) { return q.grad(x); },
                            {0.0, 0.0, 0.0}, p);
  CHECK(traj.stop_reason == StopReason::StepFloor);
  for (double v : traj.iterates.back()) CHECK(v == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("trajectory invariants") {
  const Quadratic q{{2.0, 1.0}};
  const DescentParams p;
  int callbacks = 0;
  const auto traj = descend([&](const Vector& x) { return q(x); }, [&](const Vector& x) { return q.grad(x); },
                            {3.0, -2.0}, p, [&](int iter, const Vector&, double, double) { CHECK(iter == callbacks++); });
  REQUIRE(traj.iterates.size() == traj.objective_values.size());
  REQUIRE(traj.iterates.size() == traj.step_sizes.size());
  CHECK(traj.step_sizes[0] == 0.0);
  // The start point is reported as iteration 0.
  CHECK(callbacks == traj.accepted_steps() + 1);
  for (std::size_t k = 1; k < traj.objective_values.size(); ++k) {
    CHECK(traj.objective_values[k] < traj.objective_values[k - 1]);
    CHECK(traj.step_sizes[k] >= p.epsilon);
  }
  CHECK(traj.accepted_steps() <= p.max_iters);
}

TEST_CASE("a stationary start stops on the step floor") {
  // -|x|^2 at the origin: the gradient vanishes and no trial can improve.
  const auto traj = descend(
      [](const Vector& x) { return -(x[0] * x[0] + x[1] * x[1]); },
      [](const Vector& x) { return Vector{-2 * x[0], -2 * x[1]}; }, {0.0, 0.0}, DescentParams{});
  CHECK(traj.stop_reason == StopReason::StepFloor);
  CHECK(traj.accepted_steps() == 0);
}

TEST_CASE("max iterations stop") {
  const Quadratic q{{1.0}};
  DescentParams p;
  p.max_iters = 3;
  p.alpha0 = 1e-3;
  const auto traj = descend([&](const Vector& x) { return q(x); }, [&](const Vector& x) { return q.grad(x); },
                            {10.0}, p);
  CHECK(traj.stop_reason == StopReason::MaxIters);
  CHECK(traj.accepted_steps() == 3);
}

TEST_CASE("infeasible trials shrink the step") {
  // Feasible only for x < 1.5; the minimizer x = 2 is outside.
  DescentParams p;
  p.alpha0 = 0.4;
  p.epsilon = 1e-6;
  const auto traj = descend(
      [](const Vector& x) {
        if (x[0] >= 1.5) throw InfeasibleShape("outside");
        return (x[0] - 2.0) * (x[0] - 2.0);
      },
      [](const Vector& x) { return Vector{2.0 * (x[0] - 2.0)}; }, {0.0}, p);
  CHECK(traj.iterates.back()[0] < 1.5);
  CHECK(traj.iterates.back()[0] > 1.4);
}

TEST_CASE("nan aborts") {
  CHECK_THROWS(descend([](const Vector&) { return std::numeric_limits<double>::quiet_NaN(); },
                       [](const Vector&) { return Vector{1.0}; }, {0.0}, DescentParams{}));
}

TEST_CASE("parameter validation") {
  DescentParams p;
  CHECK_NOTHROW(validate(p));
  for (auto mutate : std::vector<void (*)(DescentParams&)>{
           [](DescentParams& d) { d.alpha0 = 0.0; }, [](DescentParams& d) { d.beta1 = 0.0; },
           [](DescentParams& d) { d.beta1 = 1.0; }, [](DescentParams& d) { d.beta2 = 1.0; },
           [](DescentParams& d) { d.epsilon = -1.0; }, [](DescentParams& d) { d.max_iters = -1; }}) {
    DescentParams bad;
    mutate(bad);
    CHECK_THROWS_AS(validate(bad), ConfigError);
  }
  CHECK(to_string(StopReason::StepFloor) == "STEP_FLOOR");
  CHECK(to_string(StopReason::MaxIters) == "MAX_ITERS");
}

TEST_CASE("trajectory csv") {
  OptTrajectory t;
  t.iterates = {{1.0, 0.5, 0.25}, {1.1, 0.4, 0.2}};
  t.objective_values = {2.0, 1.0};
  t.step_sizes = {0.0, 0.005};
  std::ostringstream os;
  write_trajectory_csv(os, t, 1);
  const std::string s = os.str();
  CHECK(s.rfind("iter,J,alpha,a0,a1,b1\n", 0) == 0);
  CHECK(s.find("\n1,1,0.0050000000000000001,1.1000000000000001,0.40000000000000002,0.20000000000000001\n") !=
        std::string::npos);
}
