#include "bernoulli/optimizer.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "bernoulli/errors.hpp"
#include "text_util.hpp"

namespace bernoulli::opt {

void validate(const DescentParams& p) {
  if (!(p.alpha0 > 0.0) || !std::isfinite(p.alpha0)) throw ConfigError("opt.alpha0 must be positive");
  if (!(p.beta1 > 0.0 && p.beta1 < 1.0)) throw ConfigError("opt.beta1 must lie in (0,1)");
  if (!(p.beta2 > 0.0 && p.beta2 < 1.0)) throw ConfigError("opt.beta2 must lie in (0,1)");
  if (!(p.epsilon > 0.0)) throw ConfigError("opt.eps must be positive");
  if (!(p.epsilon < p.alpha0)) throw ConfigError("opt.eps must be smaller than opt.alpha0");
  if (p.max_iters < 0) throw ConfigError("opt.max_iters must be non-negative");
}

std::string_view to_string(StopReason reason) {
  return reason == StopReason::StepFloor ? "STEP_FLOOR" : "MAX_ITERS";
}

namespace {

double trial_value(const Objective& objective, const Vector& x) {
  double z;
  try {
    z = objective(x);
  } catch (const InfeasibleShape&) {
    return std::numeric_limits<double>::infinity();
  }
  if (std::isnan(z)) throw Error("objective returned NaN");
  return z;
}

}  // namespace

OptTrajectory descend(const Objective& objective, const Gradient& gradient, const Vector& x0,
                      const DescentParams& params, const IterationCallback& on_accept) {
  validate(params);
  OptTrajectory traj;
  Vector x = x0;
  double fx = objective(x);
  if (!std::isfinite(fx)) throw Error("objective is not finite at the start point");
  traj.iterates.push_back(x);
  traj.objective_values.push_back(fx);
  traj.step_sizes.push_back(0.0);
  if (on_accept) on_accept(0, x, fx, 0.0);

  double alpha = params.alpha0;
  Vector trial(x.size());
  for (int k = 0; k < params.max_iters; ++k) {
    const Vector g = gradient(x);
    if (g.size() != x.size()) throw Error("gradient has the wrong dimension");
    for (double gi : g) {
      if (!std::isfinite(gi)) throw Error("gradient is not finite at iteration " + std::to_string(k));
    }
    auto step = [&](double a) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - a * g[i];
      return trial_value(objective, trial);
    };

    double z = step(alpha);
    double used = alpha;
    if (z < fx) alpha /= params.beta1;
    while (z >= fx && alpha >= params.epsilon) {
      alpha *= params.beta2;
      z = step(alpha);
      used = alpha;
    }
    if (alpha < params.epsilon) {
      traj.stop_reason = StopReason::StepFloor;
      return traj;
    }
    // The point actually tested is accepted; a grown alpha applies from the
    // next iteration on.
    x = trial;
    fx = z;
    traj.iterates.push_back(x);
    traj.objective_values.push_back(fx);
    traj.step_sizes.push_back(used);
    if (on_accept) on_accept(k + 1, x, fx, used);
  }
  traj.stop_reason = StopReason::MaxIters;
  return traj;
}

void write_trajectory_csv(std::ostream& os, const OptTrajectory& traj, int order) {
  os << "iter,J,alpha";
  for (int i = 0; i <= order; ++i) os << ",a" << i;
  for (int i = 1; i <= order; ++i) os << ",b" << i;
  os << '\n';
  for (std::size_t k = 0; k < traj.iterates.size(); ++k) {
    os << k << ',' << detail::format_real(traj.objective_values[k]) << ','
       << detail::format_real(traj.step_sizes[k]);
    for (double c : traj.iterates[k]) os << ',' << detail::format_real(c);
    os << '\n';
  }
}

}  // namespace bernoulli::opt
