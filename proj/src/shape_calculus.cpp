#include "bernoulli/shape_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bernoulli/errors.hpp"
#include "bernoulli/meshing.hpp"

namespace bernoulli::shape {

void check_problem(const ProblemData& problem, const fem::Discretization& disc) {
  const Mesh& mesh = disc.mesh();
  for (int v : disc.gamma_nodes()) {
    if (!(problem.g.value(mesh.nodes[v]) > 0.0)) throw Error("g must be positive on Gamma");
  }
  for (int v : disc.sigma_nodes()) {
    if (!(problem.h.value(mesh.nodes[v]) > 0.0)) throw Error("h must be positive on Sigma");
  }
}

double target_edge_length(const std::vector<Point2>& gamma, const MeshParams& params) {
  if (params.target_edge_length > 0.0) return params.target_edge_length;
  return params.edge_factor * perimeter(gamma) / params.cnt_gamma;
}

fem::MeshPtr build_mesh(const FourierBoundary& boundary, const FixedBoundarySpec& sigma,
                        const MeshParams& params) {
  if (params.cnt_gamma < 8 || params.cnt_sigma < 8) throw Error("boundary point counts must be at least 8");
  check_admissible(boundary, sigma);
  const auto gamma_pts = sample_polyline(boundary, params.cnt_gamma);
  const auto sigma_pts = sigma.sample(params.cnt_sigma);
  MeshOptions options;
  options.target_edge_length = target_edge_length(gamma_pts, params);
  options.min_angle_deg = params.min_angle_deg;
  options.split_boundary_in_refinement = params.split_boundary;
  if (params.graded) {
    // Blend the two boundary spacings by relative distance to each loop.
    const double s_gamma = params.edge_factor * perimeter(gamma_pts) / params.cnt_gamma;
    const double s_sigma = params.edge_factor * perimeter(sigma_pts) / params.cnt_sigma;
    options.size_field = [gamma_pts, sigma_pts, s_gamma, s_sigma](Point2 x) {
      double dg = std::numeric_limits<double>::infinity(), ds = dg;
      for (const Point2& p : gamma_pts) dg = std::min(dg, norm2(x - p));
      for (const Point2& p : sigma_pts) ds = std::min(ds, norm2(x - p));
      dg = std::sqrt(dg);
      ds = std::sqrt(ds);
      return (dg * s_sigma + ds * s_gamma) / (dg + ds);
    };
  }
  return std::make_shared<const Mesh>(triangulate(gamma_pts, sigma_pts, options));
}

ShapeEvaluation evaluate_on_mesh(const ProblemData& problem, const FourierBoundary& boundary,
                                 fem::MeshPtr mesh) {
  ShapeEvaluation ev;
  ev.boundary = boundary;
  ev.disc = std::make_shared<const fem::Discretization>(std::move(mesh));
  const fem::Discretization& disc = *ev.disc;
  check_problem(problem, disc);
  ev.u = disc.solve_mixed(problem.f, problem.g, problem.h);

  std::vector<double> gamma_u;
  gamma_u.reserve(disc.gamma_nodes().size());
  for (int v : disc.gamma_nodes()) gamma_u.push_back(ev.u.values[v]);
  const std::vector<double> zeros(disc.sigma_nodes().size(), 0.0);
  ev.w = disc.solve_dirichlet(gamma_u, zeros, ScalarFunction{});
  ev.flux = disc.normal_flux(ev.w, ScalarFunction{}, BoundaryTag::Gamma);

  std::vector<double> q2(ev.flux.size());
  for (std::size_t k = 0; k < q2.size(); ++k) q2[k] = ev.flux[k] * ev.flux[k];
  ev.J = 0.5 * disc.boundary_integral(BoundaryTag::Gamma, q2);
  return ev;
}

ShapeEvaluation evaluate(const ProblemData& problem, const FourierBoundary& boundary,
                         const MeshParams& params) {
  return evaluate_on_mesh(problem, boundary, build_mesh(boundary, problem.sigma, params));
}

fem::ScalarField solve_adjoint(const ShapeEvaluation& eval) {
  const fem::Discretization& disc = *eval.disc;
  if (eval.flux.size() != disc.gamma_nodes().size()) throw Error("evaluation holds no Gamma flux");
  const std::vector<double> zeros(disc.sigma_nodes().size(), 0.0);
  return disc.solve_dirichlet(eval.flux, zeros, ScalarFunction{});
}

std::string to_string(VelocityMode mode) {
  return (mode.kind == ModeKind::Cos ? "COS(" : "SIN(") + std::to_string(mode.index) + ")";
}

std::vector<VelocityMode> gradient_modes(int order) {
  if (order < 0) throw Error("negative Fourier order");
  std::vector<VelocityMode> modes;
  for (int i = 0; i <= order; ++i) modes.push_back({ModeKind::Cos, i});
  for (int i = 1; i <= order; ++i) modes.push_back({ModeKind::Sin, i});
  return modes;
}

fem::VectorField extend_velocity(const fem::Discretization& disc, VelocityMode mode) {
  if (mode.index < 0) throw Error("negative mode index");
  const Mesh& mesh = disc.mesh();
  const auto& loop = disc.gamma_nodes();
  std::vector<double> vx(loop.size()), vy(loop.size());
  for (std::size_t k = 0; k < loop.size(); ++k) {
    const double theta = polar_angle(mesh.nodes[loop[k]]);
    const double t = mode.kind == ModeKind::Cos ? std::cos(mode.index * theta) : std::sin(mode.index * theta);
    vx[k] = t * std::cos(theta);
    vy[k] = t * std::sin(theta);
  }
  const std::vector<double> zeros(disc.sigma_nodes().size(), 0.0);
  return {disc.solve_dirichlet(vx, zeros, ScalarFunction{}), disc.solve_dirichlet(vy, zeros, ScalarFunction{})};
}

namespace {

// Everything in the integrand that does not depend on W.
struct AdjointTrace {
  std::vector<double> phi;     // per mesh node
  std::vector<double> dp_dn;   // per Gamma node
  std::vector<UnitVector2> n;  // per Gamma node
};

AdjointTrace adjoint_trace(const ShapeEvaluation& eval, const fem::ScalarField& p, const ProblemData& problem) {
  const fem::Discretization& disc = *eval.disc;
  const Mesh& mesh = disc.mesh();
  if (p.values.size() != mesh.nodes.size()) throw Error("adjoint field is not on the evaluation mesh");
  AdjointTrace tr;
  tr.phi.resize(mesh.nodes.size());
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    tr.phi[i] = 0.5 * p.values[i] * p.values[i] + p.values[i] * problem.g.value(mesh.nodes[i]);
  }
  tr.dp_dn = disc.normal_flux(p, ScalarFunction{}, BoundaryTag::Gamma);
  for (int v : disc.gamma_nodes()) tr.n.push_back(eval_normal(eval.boundary, polar_angle(mesh.nodes[v])));
  return tr;
}

double euler_derivative_with(const ShapeEvaluation& eval, const fem::ScalarField& p, const AdjointTrace& tr,
                             const fem::VectorField& W, const ProblemData& problem) {
  const fem::Discretization& disc = *eval.disc;
  const Mesh& mesh = disc.mesh();
  if (W.x.values.size() != mesh.nodes.size() || W.y.values.size() != mesh.nodes.size()) {
    throw Error("velocity field is not on the evaluation mesh");
  }
  const auto& loop = disc.gamma_nodes();
  const auto& edge_tri = disc.gamma_edge_triangles();
  const std::size_t ng = loop.size();
  double total = 0.0;
  for (std::size_t k = 0; k < ng; ++k) {
    const std::size_t ends[2] = {k, (k + 1) % ng};
    const auto t = static_cast<std::size_t>(edge_tri[k]);
    const auto& tri = mesh.triangles[t];
    Vec2 grad_phi, grad_wx, grad_wy;
    for (int j = 0; j < 3; ++j) {
      const Vec2 b = disc.basis_gradient(t, j);
      grad_phi = grad_phi + tr.phi[tri[j]] * b;
      grad_wx = grad_wx + W.x.values[tri[j]] * b;
      grad_wy = grad_wy + W.y.values[tri[j]] * b;
    }
    const double div_w = grad_wx.x + grad_wy.y;
    double values[2];
    for (int e = 0; e < 2; ++e) {
      const std::size_t kk = ends[e];
      const int v = loop[kk];
      const Point2 x = mesh.nodes[v];
      const Vec2 n = tr.n[kk].vec();
      const Vec2 w{W.x.values[v], W.y.values[v]};
      const double wn = dot(w, n);
      const double pv = p.values[v];
      const double gv = problem.g.value(x);
      const double dg_dn = dot(problem.g.gradient(x), n);
      const double first = wn * (pv * (problem.f.value(x) - dg_dn) - (gv + pv) * tr.dp_dn[kk]);
      // (DW n).n with DW_ij = d_j W_i
      const double dwnn = n.x * dot(grad_wx, n) + n.y * dot(grad_wy, n);
      const double phi = tr.phi[v];
      const double second = dot(grad_phi, w) + phi * div_w - wn * dot(grad_phi, n) - phi * dwnn;
      values[e] = first - second;
    }
    const double len = norm(mesh.nodes[loop[ends[1]]] - mesh.nodes[loop[ends[0]]]);
    total += 0.5 * len * (values[0] + values[1]);
  }
  return total;
}

}  // namespace

double euler_derivative(const ShapeEvaluation& eval, const fem::ScalarField& p, const fem::VectorField& W,
                        const ProblemData& problem) {
  return euler_derivative_with(eval, p, adjoint_trace(eval, p, problem), W, problem);
}

std::vector<double> gradient(const ShapeEvaluation& eval, const ProblemData& problem) {
  const fem::ScalarField p = solve_adjoint(eval);
  const AdjointTrace tr = adjoint_trace(eval, p, problem);
  std::vector<double> grad;
  for (const VelocityMode& mode : gradient_modes(eval.boundary.order())) {
    grad.push_back(euler_derivative_with(eval, p, tr, extend_velocity(*eval.disc, mode), problem));
  }
  return grad;
}

ValueAndGradient value_and_gradient(const ProblemData& problem, const FourierBoundary& boundary,
                                    const MeshParams& params) {
  ValueAndGradient out{evaluate(problem, boundary, params), {}};
  out.gradient = gradient(out.eval, problem);
  return out;
}

std::vector<double> gradient(const ProblemData& problem, const FourierBoundary& boundary,
                             const MeshParams& params) {
  return value_and_gradient(problem, boundary, params).gradient;
}

}  // namespace bernoulli::shape
