#pragma once

// Independent checks: finite-difference gradients, the known circular optimum
// of the log-distance problem and a second-difference probe of the Hessian.

#include <functional>
#include <iosfwd>
#include <vector>

#include "bernoulli/shape_calculus.hpp"

namespace bernoulli::validation {

enum class FdMode { Remesh, Morph };

struct FdParams {
  double h = 1e-4;
  FdMode mode = FdMode::Morph;
};

void validate(const FdParams& params);

// (F(x + h e) - F(x - h e)) / (2h) for each unit vector e.
std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& f,
                                       const std::vector<double>& x, double h);

// J restricted to the line x + t e_mode. Remesh builds a fresh mesh per call;
// Morph moves the nodes of the mesh at x along the harmonic extension of the
// mode, so every call shares the same connectivity.
class ShapeLine {
 public:
  ShapeLine(const shape::ProblemData& problem, const FourierBoundary& boundary, const shape::MeshParams& params,
            FdMode mode);
  // The mode index may exceed the boundary's order.
  double operator()(shape::VelocityMode mode, double t) const;
  const shape::ShapeEvaluation& base() const { return base_; }

 private:
  shape::ProblemData problem_;
  FourierBoundary boundary_;
  shape::MeshParams params_;
  FdMode mode_;
  shape::ShapeEvaluation base_;
};

// Copy of `boundary` with the coefficient of `mode` shifted by t.
FourierBoundary perturbed(const FourierBoundary& boundary, shape::VelocityMode mode, double t);

std::vector<double> fd_gradient(const shape::ProblemData& problem, const FourierBoundary& boundary,
                                const shape::MeshParams& params, const FdParams& fd = {});

struct CircleError {
  double mean_radius_dev = 0.0;
  double max_radius_dev = 0.0;
};

// |r(theta) - 1| averaged and maximized over 4096 equispaced angles.
CircleError exact_circle_error(const FourierBoundary& boundary);

// (F(x + d e) - 2 F(x) + F(x - d e)) / d^2 along one mode.
double hessian_probe(const shape::ProblemData& problem, const FourierBoundary& boundary,
                     const shape::MeshParams& params, shape::VelocityMode mode, double delta = 1e-2,
                     FdMode fd_mode = FdMode::Morph);

struct GradientRow {
  std::size_t component = 0;
  double analytic = 0.0;
  double fd = 0.0;
};

// `component,analytic,fd,rel_diff`
void write_gradient_report(std::ostream& os, const std::vector<GradientRow>& rows);

struct HessianRow {
  shape::VelocityMode mode;
  double value = 0.0;
};

// `mode,value`
void write_hessian_report(std::ostream& os, const std::vector<HessianRow>& rows);

}  // namespace bernoulli::validation
