#pragma once

// Objective J = 1/2 int_Gamma (dw/dn)^2, its adjoint, harmonic velocity
// extensions and the curvature-free Euler derivative giving dF/da_i, dF/db_i.

#include <memory>
#include <string>
#include <vector>

#include "bernoulli/fem.hpp"
#include "bernoulli/functions.hpp"
#include "bernoulli/geometry.hpp"

namespace bernoulli::shape {

struct ProblemData {
  ScalarFunction f;
  ScalarFunction g = ScalarFunction::constant(1.0);
  ScalarFunction h = ScalarFunction::constant(1.0);
  FixedBoundarySpec sigma = FixedBoundarySpec(CircleSigma{{0.0, 0.0}, 0.3});
};

// Throws Error unless g > 0 at every Gamma node and h > 0 at every Sigma node.
void check_problem(const ProblemData& problem, const fem::Discretization& disc);

struct MeshParams {
  int cnt_sigma = 48;  // points on Sigma (cnt1)
  int cnt_gamma = 100; // points on Gamma (cnt2)
  // Interior edge bound = edge_factor * perimeter(Gamma polyline) / cnt_gamma,
  // unless target_edge_length > 0 is given explicitly.
  double edge_factor = 1.0;
  double target_edge_length = 0.0;
  double min_angle_deg = 20.0;
  // Interpolate the bound between the Sigma and Gamma spacings by distance.
  bool graded = false;
  bool split_boundary = false;
};

double target_edge_length(const std::vector<Point2>& gamma, const MeshParams& params);

// Checks admissibility, samples both loops and triangulates. Throws
// InfeasibleShape or MeshError.
fem::MeshPtr build_mesh(const FourierBoundary& boundary, const FixedBoundarySpec& sigma,
                        const MeshParams& params);

struct ShapeEvaluation {
  std::shared_ptr<const fem::Discretization> disc;
  FourierBoundary boundary;
  fem::ScalarField u;
  fem::ScalarField w;
  std::vector<double> flux;  // dw/dn at gamma_nodes()
  double J = 0.0;
};

ShapeEvaluation evaluate(const ProblemData& problem, const FourierBoundary& boundary,
                         const MeshParams& params);
// Same, on a given mesh whose Gamma nodes lie on `boundary`.
ShapeEvaluation evaluate_on_mesh(const ProblemData& problem, const FourierBoundary& boundary,
                                 fem::MeshPtr mesh);

// p harmonic, p = dw/dn on Gamma, p = 0 on Sigma.
fem::ScalarField solve_adjoint(const ShapeEvaluation& eval);

enum class ModeKind { Cos, Sin };

struct VelocityMode {
  ModeKind kind = ModeKind::Cos;
  int index = 0;
};

std::string to_string(VelocityMode mode);

// (COS 0, ..., COS N, SIN 1, ..., SIN N)
std::vector<VelocityMode> gradient_modes(int order);

// Boundary data t(theta) (cos theta, sin theta) on Gamma with t = cos(i theta) or
// sin(i theta), zero on Sigma; each component extended harmonically.
fem::VectorField extend_velocity(const fem::Discretization& disc, VelocityMode mode);

double euler_derivative(const ShapeEvaluation& eval, const fem::ScalarField& p, const fem::VectorField& W,
                        const ProblemData& problem);

struct ValueAndGradient {
  ShapeEvaluation eval;
  std::vector<double> gradient;
};

ValueAndGradient value_and_gradient(const ProblemData& problem, const FourierBoundary& boundary,
                                    const MeshParams& params);
std::vector<double> gradient(const ProblemData& problem, const FourierBoundary& boundary,
                             const MeshParams& params);
// Gradient on an already evaluated shape.
std::vector<double> gradient(const ShapeEvaluation& eval, const ProblemData& problem);

}  // namespace bernoulli::shape
