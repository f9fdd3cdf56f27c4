#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bernoulli/errors.hpp"
#include "bernoulli/fem.hpp"
#include "bernoulli/geometry.hpp"

using namespace bernoulli;
using fem::MeshPtr;

namespace {

MeshPtr annulus_mesh(int n_gamma, int n_sigma, double h) {
  const auto gamma = sample_polyline(FourierBoundary::circle(1.0), n_gamma);
  const auto sigma = FixedBoundarySpec(CircleSigma{{0, 0}, 0.3}).sample(n_sigma);
  MeshOptions opt;
  opt.target_edge_length = h;
  opt.split_boundary_in_refinement = false;
  return std::make_shared<const Mesh>(triangulate(gamma, sigma, opt));
}

ScalarFunction poly(std::vector<PolynomialFn::Term> terms) { return PolynomialFn{std::move(terms)}; }

std::vector<double> values_on(const Mesh& m, const std::vector<int>& ids, const ScalarFunction& fn) {
  std::vector<double> v;
  for (int i : ids) v.push_back(fn.value(m.nodes[i]));
  return v;
}

}  // namespace

TEST_CASE("local stiffness of the reference triangle") {
  Mesh m;
  m.nodes = {{0, 0}, {1, 0}, {0, 1}};
  m.triangles = {{0, 1, 2}};
  const auto sys = fem::assemble_stiffness(m);
  const double expected[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(sys.matrix.coeff(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-15));
  }
  CHECK(sys.rhs.size() == 3);

  m.nodes[2] = {2, 0};
  CHECK_THROWS_AS(fem::assemble_stiffness(m), MeshError);
}

TEST_CASE("stiffness is symmetric and annihilates constants") {
  const auto mesh = annulus_mesh(60, 24, 0.1);
  const auto sys = fem::assemble_stiffness(*mesh);
  const Eigen::SparseMatrix<double> A = sys.matrix;
  const Eigen::SparseMatrix<double> At = A.transpose();
  CHECK((A - At).norm() <= 1e-14 * A.norm());
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(A.rows());
  CHECK((A * ones).cwiseAbs().maxCoeff() <= 1e-13);
  for (int i = 0; i < A.rows(); ++i) CHECK(A.coeff(i, i) > 0.0);
}

TEST_CASE("dirichlet patch test reproduces linear fields") {
  const auto mesh = annulus_mesh(50, 20, 0.12);
  const fem::Discretization disc(mesh);
  const auto lin = poly({{1.0, 0, 0}, {1.0, 1, 0}, {2.0, 0, 1}});
  const auto u = disc.solve_dirichlet(values_on(*mesh, disc.gamma_nodes(), lin),
                                      values_on(*mesh, disc.sigma_nodes(), lin), ScalarFunction{});
  for (std::size_t i = 0; i < mesh->node_count(); ++i) {
    CHECK(std::abs(u[i] - lin.value(mesh->nodes[i])) <= 1e-12);
  }
  const auto grads = disc.triangle_gradient(u);
  for (const Vec2& g : grads) {
    CHECK(g.x == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(g.y == doctest::Approx(2.0).epsilon(1e-10));
  }
}

TEST_CASE("mixed problem with zero flux keeps a constant") {
  const auto mesh = annulus_mesh(40, 16, 0.15);
  const auto u = fem::solve_mixed(mesh, ScalarFunction{}, ScalarFunction::constant(0.0),
                                  ScalarFunction::constant(2.5));
  for (double v : u.values) CHECK(std::abs(v - 2.5) <= 1e-12);
}

TEST_CASE("quadratic harmonic field converges at second order in L2") {
  const auto exact = poly({{1.0, 2, 0}, {-1.0, 0, 2}});
  double errors[2];
  for (int level = 0; level < 2; ++level) {
    const int scale = 1 << level;
    const auto mesh = annulus_mesh(40 * scale, 16 * scale, 0.16 / scale);
    const fem::Discretization disc(mesh);
    const auto u = disc.solve_dirichlet(values_on(*mesh, disc.gamma_nodes(), exact),
                                        values_on(*mesh, disc.sigma_nodes(), exact), ScalarFunction{});
    errors[level] = fem::l2_error(disc, u, exact);
  }
  const double rate = std::log2(errors[0] / errors[1]);
  CAPTURE(errors[0]);
  CAPTURE(errors[1]);
  CHECK(rate >= 1.8);
}

TEST_CASE("poisson load is integrated") {
  // -lap u = -4 with u = x^2 + y^2 on both loops.
  const auto exact = poly({{1.0, 2, 0}, {1.0, 0, 2}});
  const auto mesh = annulus_mesh(80, 32, 0.06);
  const fem::Discretization disc(mesh);
  const auto u = disc.solve_dirichlet(values_on(*mesh, disc.gamma_nodes(), exact),
                                      values_on(*mesh, disc.sigma_nodes(), exact), ScalarFunction::constant(-4.0));
  CHECK(fem::l2_error(disc, u, exact) <= 2e-3);
  // F_i sums to the integral of f over the mesh.
  double area = 0.0;
  for (std::size_t t = 0; t < mesh->triangle_count(); ++t) area += disc.area(t);
  CHECK(disc.load_vector(ScalarFunction::constant(3.0)).sum() == doctest::Approx(3.0 * area).epsilon(1e-13));
}

TEST_CASE("logarithmic solution of the mixed problem") {
  // u = -log r: flux -du/dn = 1 on r = 1, u = -log 0.3 on r = 0.3.
  const auto exact = ScalarFunction(LogDistanceFn{1.0, {0, 0}});
  double previous = 1e300;
  for (int scale : {1, 2}) {
    const auto mesh = annulus_mesh(50 * scale, 24 * scale, 0.12 / scale);
    const fem::Discretization disc(mesh);
    const auto u = disc.solve_mixed(ScalarFunction{}, ScalarFunction::constant(1.0),
                                    ScalarFunction::constant(-std::log(0.3)));
    const double err = fem::l2_error(disc, u, exact);
    CHECK(err <= 0.02);
    CHECK(err < previous);
    previous = err;

    const auto q = disc.normal_flux(u, ScalarFunction{}, BoundaryTag::Gamma);
    REQUIRE(q.size() == disc.gamma_nodes().size());
    for (double v : q) CHECK(v == doctest::Approx(-1.0).epsilon(0.01));
  }
}

TEST_CASE("recovered flux of a linear field") {
  const auto mesh = annulus_mesh(120, 40, 0.08);
  const auto u = fem::interpolate(mesh, poly({{1.0, 1, 0}}));
  const auto q = fem::normal_flux_on_gamma(u, ScalarFunction{});
  const fem::Discretization disc(mesh);
  const auto& ids = disc.gamma_nodes();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    // On the unit circle n = (x, y), so du/dn = x.
    CHECK(std::abs(q[k] - mesh->nodes[ids[k]].x) <= 5e-3);
  }
  // The trapezoid integral of recovered flux equals the residual sum exactly,
  // and the integral of n_x over a closed loop vanishes.
  CHECK(std::abs(disc.boundary_integral(BoundaryTag::Gamma, q)) <= 1e-12);
}

TEST_CASE("boundary integrals") {
  const auto mesh = annulus_mesh(64, 24, 0.15);
  const fem::Discretization disc(mesh);
  const auto& ids = disc.gamma_nodes();
  std::vector<double> ones(ids.size(), 1.0), xs;
  for (int i : ids) xs.push_back(mesh->nodes[i].x);
  CHECK(disc.boundary_integral(BoundaryTag::Gamma, ones) ==
        doctest::Approx(perimeter(sample_polyline(FourierBoundary::circle(1.0), 64))).epsilon(1e-14));
  CHECK(std::abs(fem::gamma_integral(*mesh, xs)) <= 1e-14);
  CHECK(disc.gamma_load_vector(ScalarFunction::constant(1.0)).sum() ==
        doctest::Approx(disc.boundary_integral(BoundaryTag::Gamma, ones)).epsilon(1e-14));
  CHECK(disc.gamma_edge_triangles().size() == ids.size());
}

TEST_CASE("triangle gradient of an affine field") {
  const auto mesh = annulus_mesh(40, 16, 0.2);
  const auto u = fem::interpolate(mesh, poly({{3.0, 1, 0}, {-2.0, 0, 1}, {5.0, 0, 0}}));
  for (const Vec2& g : fem::triangle_gradient(u)) {
    CHECK(std::abs(g.x - 3.0) <= 1e-11);
    CHECK(std::abs(g.y + 2.0) <= 1e-11);
  }
}

TEST_CASE("constrained solver honours the residual limit") {
  const auto mesh = annulus_mesh(40, 16, 0.15);
  const auto sys = fem::assemble_stiffness(*mesh);
  std::vector<char> mask(mesh->node_count(), 0);
  for (const auto& e : mesh->boundary_edges) mask[e.a] = mask[e.b] = 1;
  for (auto kind : {fem::SolverKind::Cholesky, fem::SolverKind::ConjugateGradient}) {
    fem::SolverOptions opt;
    opt.preferred = kind;
    const fem::ConstrainedSolver solver(sys.matrix, mask, opt);
    Eigen::VectorXd load = Eigen::VectorXd::Constant(mesh->node_count(), 0.01);
    Eigen::VectorXd values = Eigen::VectorXd::Zero(mesh->node_count());
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) values[i] = mesh->nodes[i].x;
    }
    const Eigen::VectorXd x = solver.solve(load, values);
    const Eigen::VectorXd r = sys.matrix * x - load;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) {
        CHECK(x[i] == values[i]);
      } else {
        CHECK(std::abs(r[i]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("field csv") {
  const auto mesh = annulus_mesh(20, 10, 0.3);
  const auto u = fem::interpolate(mesh, ScalarFunction::constant(0.1));
  std::ostringstream os;
  fem::write_field_csv(os, u);
  std::istringstream is(os.str());
  std::string line;
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty() || !std::isdigit(static_cast<unsigned char>(line[0]))) continue;
    ++rows;
  }
  CHECK(rows == mesh->node_count());
  CHECK(os.str().find("0.10000000000000001") != std::string::npos);
}
