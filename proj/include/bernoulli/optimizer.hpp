#pragma once

// Gradient descent with a step size that grows after an improving trial and
// shrinks until the trial improves; stops once the step falls below a floor.

#include <functional>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace bernoulli::opt {

struct DescentParams {
  double alpha0 = 0.005;
  double beta1 = 2.0 / 3.0;
  double beta2 = 0.5;
  double epsilon = 1e-4;
  int max_iters = 200;
};

// Throws ConfigError on invalid parameters.
void validate(const DescentParams& params);

enum class StopReason { StepFloor, MaxIters };
std::string_view to_string(StopReason reason);

struct OptTrajectory {
  // iterates[k], objective_values[k]: state after k accepted steps.
  std::vector<std::vector<double>> iterates;
  std::vector<double> objective_values;
  // step_sizes[k]: step that produced iterates[k] (0 for the start point).
  std::vector<double> step_sizes;
  StopReason stop_reason = StopReason::MaxIters;

  int accepted_steps() const { return static_cast<int>(iterates.size()) - 1; }
};

using Vector = std::vector<double>;
// An objective may throw InfeasibleShape; that trial counts as +infinity.
using Objective = std::function<double(const Vector&)>;
using Gradient = std::function<Vector(const Vector&)>;
using IterationCallback = std::function<void(int iter, const Vector& x, double value, double alpha)>;

OptTrajectory descend(const Objective& objective, const Gradient& gradient, const Vector& x0,
                      const DescentParams& params, const IterationCallback& on_accept = {});

// Header `iter,J,alpha,a0..aN,b1..bN`, one row per entry of the trajectory.
void write_trajectory_csv(std::ostream& os, const OptTrajectory& trajectory, int order);

}  // namespace bernoulli::opt
