#pragma once

// Piecewise-linear (P1) Lagrange finite elements on a Mesh.

#include <Eigen/Sparse>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "bernoulli/functions.hpp"
#include "bernoulli/meshing.hpp"

namespace bernoulli::fem {

using MeshPtr = std::shared_ptr<const Mesh>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

// One value per mesh node.
struct ScalarField {
  MeshPtr mesh;
  std::vector<double> values;

  double operator[](std::size_t i) const { return values[i]; }
};

struct VectorField {
  ScalarField x;
  ScalarField y;
};

// Stiffness matrix with an optional load and Dirichlet constraints.
struct SparseSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<int> constrained;
  std::vector<double> constrained_values;
};

// A_ij = integral of grad(phi_i) . grad(phi_j), exact per triangle. Zero rhs, no
// constraints. Throws MeshError on a degenerate triangle.
SparseSystem assemble_stiffness(const Mesh& mesh);

enum class SolverKind { Cholesky, ConjugateGradient };

struct SolverOptions {
  SolverKind preferred = SolverKind::Cholesky;
  double cg_tolerance = 1e-10;
  // Returned solutions satisfy |A x - b| <= residual_limit * |b|.
  double residual_limit = 1e-10;
};

// Symmetric elimination of constrained nodes (their columns move to the right
// hand side) and a factorization of the remaining SPD block, reused across
// solves. Falls back to Jacobi-preconditioned CG if the factorization fails or
// misses the residual limit.
class ConstrainedSolver {
 public:
  ConstrainedSolver(const SparseMatrix& full, std::span<const char> constrained_mask,
                    SolverOptions options = {});
  ~ConstrainedSolver();
  ConstrainedSolver(ConstrainedSolver&&) noexcept;
  ConstrainedSolver& operator=(ConstrainedSolver&&) noexcept;

  // `load` is the full-length right-hand side; `values` supplies the
  // constrained entries (others ignored). Throws SolverError.
  Eigen::VectorXd solve(const Eigen::VectorXd& load, const Eigen::VectorXd& values) const;

  std::size_t free_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Everything derived from one mesh that the solves share: stiffness, P1
// basis gradients, boundary loops and the two factorized operators (Dirichlet
// on Sigma only, and Dirichlet on both loops). Immutable after construction.
class Discretization {
 public:
  explicit Discretization(MeshPtr mesh, SolverOptions options = {});
  ~Discretization();

  const Mesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  const SparseMatrix& stiffness() const { return stiffness_; }
  const std::vector<int>& gamma_nodes() const { return gamma_nodes_; }
  const std::vector<int>& sigma_nodes() const { return sigma_nodes_; }
  const std::vector<int>& boundary_loop(BoundaryTag tag) const {
    return tag == BoundaryTag::Gamma ? gamma_nodes_ : sigma_nodes_;
  }
  // Triangle adjacent to each Gamma edge (gamma_nodes()[k], gamma_nodes()[k+1]).
  const std::vector<int>& gamma_edge_triangles() const { return gamma_edge_tri_; }

  // -lap u = f, -du/dn = g on Gamma, u = h on Sigma.
  ScalarField solve_mixed(const ScalarFunction& f, const ScalarFunction& g,
                          const ScalarFunction& h) const;
  // -lap w = f with w given on both loops (values ordered as the loops).
  ScalarField solve_dirichlet(std::span<const double> gamma_values,
                              std::span<const double> sigma_values, const ScalarFunction& f) const;

  // Variational recovery of the outward normal derivative on a loop: solves
  // M_loop q = A field - F restricted to loop nodes.
  std::vector<double> normal_flux(const ScalarField& field, const ScalarFunction& f,
                                  BoundaryTag tag) const;

  // Edgewise trapezoid rule over a loop, values ordered as the loop.
  double boundary_integral(BoundaryTag tag, std::span<const double> values) const;

  // Constant gradient of the P1 interpolant on each triangle.
  std::vector<Vec2> triangle_gradient(const ScalarField& field) const;
  Vec2 basis_gradient(std::size_t triangle, int local) const;
  double area(std::size_t triangle) const { return area_[triangle]; }

  // F_i = integral of f phi_i (edge-midpoint rule, exact for quadratics).
  Eigen::VectorXd load_vector(const ScalarFunction& f) const;
  // integral over Gamma of g phi_i (two-point Gauss on each edge).
  Eigen::VectorXd gamma_load_vector(const ScalarFunction& g) const;

 private:
  MeshPtr mesh_;
  SparseMatrix stiffness_;
  std::vector<double> area_;
  std::vector<double> gx_[3];
  std::vector<double> gy_[3];
  std::vector<int> gamma_nodes_;
  std::vector<int> sigma_nodes_;
  std::vector<int> gamma_edge_tri_;
  std::unique_ptr<ConstrainedSolver> sigma_solver_;
  std::unique_ptr<ConstrainedSolver> both_solver_;
};

// Single-shot wrappers; each builds a Discretization.
ScalarField solve_mixed(const MeshPtr& mesh, const ScalarFunction& f, const ScalarFunction& g,
                        const ScalarFunction& h);
ScalarField solve_dirichlet(const MeshPtr& mesh, std::span<const double> gamma_values,
                            std::span<const double> sigma_values, const ScalarFunction& f);
std::vector<double> normal_flux_on_gamma(const ScalarField& field, const ScalarFunction& f);
std::vector<double> normal_flux_on_sigma(const ScalarField& field, const ScalarFunction& f);
double gamma_integral(const Mesh& mesh, std::span<const double> values);
std::vector<Vec2> triangle_gradient(const ScalarField& field);

// Nodal interpolant of an analytic function.
ScalarField interpolate(const MeshPtr& mesh, const ScalarFunction& fn);

// L2 norm of (field - exact) with a 7-point triangle rule on the P1 interpolant.
double l2_error(const Discretization& disc, const ScalarField& field, const ScalarFunction& exact);

// `node_index,value` per line.
void write_field_csv(std::ostream& os, const ScalarField& field);

}  // namespace bernoulli::fem
