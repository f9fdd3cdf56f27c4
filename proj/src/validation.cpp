#include "bernoulli/validation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "bernoulli/errors.hpp"
#include "bernoulli/meshing.hpp"
#include "text_util.hpp"

namespace bernoulli::validation {

void validate(const FdParams& params) {
  if (!(params.h > 1e-8 && params.h < 1e-1)) throw ConfigError("finite-difference step must lie in (1e-8, 1e-1)");
}

std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& f,
                                       const std::vector<double>& x, double h) {
  std::vector<double> grad(x.size());
  std::vector<double> xp = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    xp[i] = x[i];
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

FourierBoundary perturbed(const FourierBoundary& boundary, shape::VelocityMode mode, double t) {
  std::vector<double> a = boundary.a(), b = boundary.b();
  const auto order = static_cast<std::size_t>(std::max(boundary.order(), mode.index));
  a.resize(order + 1, 0.0);
  b.resize(order, 0.0);
  if (mode.kind == shape::ModeKind::Cos) {
    a[static_cast<std::size_t>(mode.index)] += t;
  } else {
    if (mode.index < 1) throw Error("SIN(0) is not a boundary mode");
    b[static_cast<std::size_t>(mode.index) - 1] += t;
  }
  return FourierBoundary(std::move(a), std::move(b));
}

ShapeLine::ShapeLine(const shape::ProblemData& problem, const FourierBoundary& boundary,
                     const shape::MeshParams& params, FdMode mode)
    : problem_(problem),
      boundary_(boundary),
      params_(params),
      mode_(mode),
      base_(shape::evaluate(problem, boundary, params)) {}

double ShapeLine::operator()(shape::VelocityMode mode, double t) const {
  const FourierBoundary moved = perturbed(boundary_, mode, t);
  if (t == 0.0) return base_.J;
  if (mode_ == FdMode::Remesh) return shape::evaluate(problem_, moved, params_).J;
  check_admissible(moved, problem_.sigma);
  const fem::VectorField W = shape::extend_velocity(*base_.disc, mode);
  auto mesh = std::make_shared<const Mesh>(displaced(base_.disc->mesh(), W.x.values, W.y.values, t));
  return shape::evaluate_on_mesh(problem_, moved, std::move(mesh)).J;
}

std::vector<double> fd_gradient(const shape::ProblemData& problem, const FourierBoundary& boundary,
                                const shape::MeshParams& params, const FdParams& fd) {
  validate(fd);
  const ShapeLine line(problem, boundary, params, fd.mode);
  std::vector<double> grad;
  for (const shape::VelocityMode& mode : shape::gradient_modes(boundary.order())) {
    grad.push_back((line(mode, fd.h) - line(mode, -fd.h)) / (2.0 * fd.h));
  }
  return grad;
}

CircleError exact_circle_error(const FourierBoundary& boundary) {
  constexpr int kSamples = 4096;
  CircleError err;
  for (int k = 0; k < kSamples; ++k) {
    const double dev = std::abs(boundary.radius(kTwoPi * k / kSamples) - 1.0);
    err.mean_radius_dev += dev;
    err.max_radius_dev = std::max(err.max_radius_dev, dev);
  }
  err.mean_radius_dev /= kSamples;
  return err;
}

double hessian_probe(const shape::ProblemData& problem, const FourierBoundary& boundary,
                     const shape::MeshParams& params, shape::VelocityMode mode, double delta, FdMode fd_mode) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("hessian probe step must lie in (0, 1)");
  const ShapeLine line(problem, boundary, params, fd_mode);
  return (line(mode, delta) - 2.0 * line.base().J + line(mode, -delta)) / (delta * delta);
}

void write_gradient_report(std::ostream& os, const std::vector<GradientRow>& rows) {
  os << "component,analytic,fd,rel_diff\n";
  for (const GradientRow& r : rows) {
    const double scale = std::max(std::abs(r.analytic), std::abs(r.fd));
    const double rel = scale > 0.0 ? std::abs(r.analytic - r.fd) / scale : 0.0;
    os << r.component << ',' << detail::format_real(r.analytic) << ',' << detail::format_real(r.fd) << ','
       << detail::format_real(rel) << '\n';
  }
}

void write_hessian_report(std::ostream& os, const std::vector<HessianRow>& rows) {
  os << "mode,value\n";
  for (const HessianRow& r : rows) os << shape::to_string(r.mode) << ',' << detail::format_real(r.value) << '\n';
}

}  // namespace bernoulli::validation
