#include "bernoulli/fem.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <unordered_map>

#include "bernoulli/errors.hpp"
#include "bernoulli/simd/kernels.hpp"
#include "text_util.hpp"

namespace bernoulli::fem {

namespace {

struct P1Basis {
  std::vector<double> area;
  std::vector<double> gx[3];
  std::vector<double> gy[3];
};

P1Basis compute_basis(const Mesh& mesh) {
  const std::size_t nt = mesh.triangles.size();
  std::vector<double> x[3], y[3];
  P1Basis basis;
  basis.area.resize(nt);
  for (int v = 0; v < 3; ++v) {
    x[v].resize(nt);
    y[v].resize(nt);
    basis.gx[v].resize(nt);
    basis.gy[v].resize(nt);
  }
  for (std::size_t t = 0; t < nt; ++t) {
    for (int v = 0; v < 3; ++v) {
      const Point2 p = mesh.nodes[mesh.triangles[t][v]];
      x[v][t] = p.x;
      y[v][t] = p.y;
    }
  }
  simd::TriangleBatch batch;
  batch.count = nt;
  simd::P1BasisOut out;
  out.area = basis.area.data();
  for (int v = 0; v < 3; ++v) {
    batch.x[v] = x[v].data();
    batch.y[v] = y[v].data();
    out.gx[v] = basis.gx[v].data();
    out.gy[v] = basis.gy[v].data();
  }
  simd::kernels().p1_basis(batch, out);
  for (std::size_t t = 0; t < nt; ++t) {
    if (!(basis.area[t] > 0.0)) {
      throw MeshError("degenerate or inverted triangle " + std::to_string(t));
    }
  }
  return basis;
}

SparseMatrix stiffness_from_basis(const Mesh& mesh, const P1Basis& basis) {
  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(9 * mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double k = basis.area[t] * (basis.gx[i][t] * basis.gx[j][t] + basis.gy[i][t] * basis.gy[j][t]);
        triplets.emplace_back(tri[i], tri[j], k);
      }
    }
  }
  const auto n = static_cast<int>(mesh.nodes.size());
  SparseMatrix a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

void matvec(const SparseMatrix& a, const double* x, double* y) {
  simd::kernels().csr_matvec(static_cast<std::size_t>(a.rows()), a.outerIndexPtr(), a.innerIndexPtr(),
                             a.valuePtr(), x, y);
}

double vec_norm(const Eigen::VectorXd& v) {
  return std::sqrt(simd::kernels().dot(v.data(), v.data(), static_cast<std::size_t>(v.size())));
}

std::uint64_t directed_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

SparseSystem assemble_stiffness(const Mesh& mesh) {
  SparseSystem sys;
  sys.matrix = stiffness_from_basis(mesh, compute_basis(mesh));
  sys.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.nodes.size()));
  return sys;
}

// ---------------------------------------------------------------------------
// ConstrainedSolver

struct ConstrainedSolver::Impl {
  SolverOptions options;
  std::size_t n = 0;
  std::vector<int> free_nodes;
  std::vector<char> constrained;
  SparseMatrix a_ff;
  SparseMatrix a_fc;  // free rows, full-width columns (constrained columns only)
  Eigen::VectorXd inv_diag;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
  bool have_llt = false;

  bool pcg(const Eigen::VectorXd& b, Eigen::VectorXd& x) const {
    const auto& k = simd::kernels();
    const std::size_t m = static_cast<std::size_t>(b.size());
    const double bnorm = vec_norm(b);
    Eigen::VectorXd r(b.size()), z(b.size()), p(b.size()), q(b.size());
    matvec(a_ff, x.data(), q.data());
    r = b - q;
    z = r.cwiseProduct(inv_diag);
    p = z;
    double rz = k.dot(r.data(), z.data(), m);
    const std::size_t max_iter = 10 * std::max<std::size_t>(m, 1);
    for (std::size_t it = 0; it < max_iter; ++it) {
      if (vec_norm(r) <= options.cg_tolerance * bnorm) return true;
      matvec(a_ff, p.data(), q.data());
      const double alpha = rz / k.dot(p.data(), q.data(), m);
      k.axpy(alpha, p.data(), x.data(), m);
      k.axpy(-alpha, q.data(), r.data(), m);
      z = r.cwiseProduct(inv_diag);
      const double rz_new = k.dot(r.data(), z.data(), m);
      k.xpby(z.data(), rz_new / rz, p.data(), m);
      rz = rz_new;
    }
    return vec_norm(r) <= options.cg_tolerance * bnorm;
  }

  double residual(const Eigen::VectorXd& b, const Eigen::VectorXd& x) const {
    Eigen::VectorXd ax(b.size());
    matvec(a_ff, x.data(), ax.data());
    return vec_norm(ax - b);
  }
};

ConstrainedSolver::ConstrainedSolver(const SparseMatrix& full, std::span<const char> constrained_mask,
                                     SolverOptions options)
    : impl_(std::make_unique<Impl>()) {
  auto& s = *impl_;
  s.options = options;
  s.n = static_cast<std::size_t>(full.rows());
  if (constrained_mask.size() != s.n) throw SolverError("constraint mask size mismatch");
  s.constrained.assign(constrained_mask.begin(), constrained_mask.end());
  std::vector<int> free_index(s.n, -1);
  for (std::size_t i = 0; i < s.n; ++i) {
    if (!s.constrained[i]) {
      free_index[i] = static_cast<int>(s.free_nodes.size());
      s.free_nodes.push_back(static_cast<int>(i));
    }
  }
  const auto nf = static_cast<int>(s.free_nodes.size());
  std::vector<Eigen::Triplet<double, int>> ff, fc;
  for (int fi = 0; fi < nf; ++fi) {
    const int row = s.free_nodes[fi];
    for (SparseMatrix::InnerIterator it(full, row); it; ++it) {
      const int col = static_cast<int>(it.col());
      if (free_index[col] >= 0) {
        ff.emplace_back(fi, free_index[col], it.value());
      } else {
        fc.emplace_back(fi, col, it.value());
      }
    }
  }
  s.a_ff.resize(nf, nf);
  s.a_ff.setFromTriplets(ff.begin(), ff.end());
  s.a_ff.makeCompressed();
  s.a_fc.resize(nf, static_cast<int>(s.n));
  s.a_fc.setFromTriplets(fc.begin(), fc.end());
  s.a_fc.makeCompressed();
  s.inv_diag = s.a_ff.diagonal().cwiseInverse();
  if (nf > 0 && options.preferred == SolverKind::Cholesky) {
    s.llt.compute(Eigen::SparseMatrix<double>(s.a_ff));
    s.have_llt = s.llt.info() == Eigen::Success;
  }
}

ConstrainedSolver::~ConstrainedSolver() = default;
ConstrainedSolver::ConstrainedSolver(ConstrainedSolver&&) noexcept = default;
ConstrainedSolver& ConstrainedSolver::operator=(ConstrainedSolver&&) noexcept = default;

std::size_t ConstrainedSolver::free_count() const { return impl_->free_nodes.size(); }

Eigen::VectorXd ConstrainedSolver::solve(const Eigen::VectorXd& load, const Eigen::VectorXd& values) const {
  const auto& s = *impl_;
  if (static_cast<std::size_t>(load.size()) != s.n || static_cast<std::size_t>(values.size()) != s.n) {
    throw SolverError("right-hand side size mismatch");
  }
  Eigen::VectorXd known = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.n));
  for (std::size_t i = 0; i < s.n; ++i) {
    if (s.constrained[i]) known[static_cast<Eigen::Index>(i)] = values[static_cast<Eigen::Index>(i)];
  }
  const auto nf = static_cast<Eigen::Index>(s.free_nodes.size());
  Eigen::VectorXd b(nf);
  for (Eigen::Index i = 0; i < nf; ++i) b[i] = load[s.free_nodes[static_cast<std::size_t>(i)]];
  Eigen::VectorXd lifted(nf);
  matvec(s.a_fc, known.data(), lifted.data());
  b -= lifted;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(nf);
  const double bnorm = vec_norm(b);
  if (nf > 0 && bnorm > 0.0) {
    bool ok = false;
    if (s.have_llt) {
      x = s.llt.solve(b);
      ok = x.allFinite() && s.residual(b, x) <= s.options.residual_limit * bnorm;
    }
    if (!ok) {
      if (!x.allFinite()) x.setZero();
      ok = s.pcg(b, x) && s.residual(b, x) <= s.options.residual_limit * bnorm;
    }
    if (!ok) throw SolverError("linear solve did not reach the residual tolerance");
  }
  Eigen::VectorXd out = known;
  for (Eigen::Index i = 0; i < nf; ++i) out[s.free_nodes[static_cast<std::size_t>(i)]] = x[i];
  return out;
}

// ---------------------------------------------------------------------------
// Discretization

Discretization::Discretization(MeshPtr mesh, SolverOptions options) : mesh_(std::move(mesh)) {
  if (!mesh_ || mesh_->triangles.empty()) throw MeshError("discretization needs a non-empty mesh");
  P1Basis basis = compute_basis(*mesh_);
  stiffness_ = stiffness_from_basis(*mesh_, basis);
  area_ = std::move(basis.area);
  for (int v = 0; v < 3; ++v) {
    gx_[v] = std::move(basis.gx[v]);
    gy_[v] = std::move(basis.gy[v]);
  }
  gamma_nodes_ = boundary_nodes(*mesh_, BoundaryTag::Gamma);
  sigma_nodes_ = boundary_nodes(*mesh_, BoundaryTag::Sigma);

  std::unordered_map<std::uint64_t, int> edge_tri;
  edge_tri.reserve(3 * mesh_->triangles.size());
  for (std::size_t t = 0; t < mesh_->triangles.size(); ++t) {
    const auto& tri = mesh_->triangles[t];
    for (int i = 0; i < 3; ++i) edge_tri.emplace(directed_key(tri[i], tri[(i + 1) % 3]), static_cast<int>(t));
  }
  const std::size_t ng = gamma_nodes_.size();
  gamma_edge_tri_.resize(ng);
  for (std::size_t k = 0; k < ng; ++k) {
    const auto it = edge_tri.find(directed_key(gamma_nodes_[k], gamma_nodes_[(k + 1) % ng]));
    if (it == edge_tri.end()) throw MeshError("Gamma edge without an adjacent triangle");
    gamma_edge_tri_[k] = it->second;
  }

  std::vector<char> on_sigma(mesh_->nodes.size(), 0), on_both(mesh_->nodes.size(), 0);
  for (int v : sigma_nodes_) on_sigma[v] = on_both[v] = 1;
  for (int v : gamma_nodes_) on_both[v] = 1;
  sigma_solver_ = std::make_unique<ConstrainedSolver>(stiffness_, on_sigma, options);
  both_solver_ = std::make_unique<ConstrainedSolver>(stiffness_, on_both, options);
}

Discretization::~Discretization() = default;

Vec2 Discretization::basis_gradient(std::size_t triangle, int local) const {
  return {gx_[local][triangle], gy_[local][triangle]};
}

Eigen::VectorXd Discretization::load_vector(const ScalarFunction& f) const {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh_->nodes.size()));
  if (f.is_zero()) return load;
  for (std::size_t t = 0; t < mesh_->triangles.size(); ++t) {
    const auto& tri = mesh_->triangles[t];
    double fm[3];  // f at the midpoint of the edge opposite local vertex i
    for (int i = 0; i < 3; ++i) {
      fm[i] = f.value(0.5 * (mesh_->nodes[tri[(i + 1) % 3]] + mesh_->nodes[tri[(i + 2) % 3]]));
    }
    for (int i = 0; i < 3; ++i) {
      load[tri[i]] += area_[t] / 6.0 * (fm[(i + 1) % 3] + fm[(i + 2) % 3]);
    }
  }
  return load;
}

Eigen::VectorXd Discretization::gamma_load_vector(const ScalarFunction& g) const {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh_->nodes.size()));
  if (g.is_zero()) return load;
  const double offset = 0.5 / std::sqrt(3.0);
  const std::size_t ng = gamma_nodes_.size();
  for (std::size_t k = 0; k < ng; ++k) {
    const int a = gamma_nodes_[k], b = gamma_nodes_[(k + 1) % ng];
    const Point2 pa = mesh_->nodes[a], pb = mesh_->nodes[b];
    const double len = norm(pb - pa);
    for (double t : {0.5 - offset, 0.5 + offset}) {
      const double gv = g.value(pa + t * (pb - pa)) * 0.5 * len;
      load[a] += (1.0 - t) * gv;
      load[b] += t * gv;
    }
  }
  return load;
}

ScalarField Discretization::solve_mixed(const ScalarFunction& f, const ScalarFunction& g,
                                        const ScalarFunction& h) const {
  Eigen::VectorXd load = load_vector(f) - gamma_load_vector(g);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(load.size());
  for (int v : sigma_nodes_) values[v] = h.value(mesh_->nodes[v]);
  const Eigen::VectorXd u = sigma_solver_->solve(load, values);
  return {mesh_, std::vector<double>(u.begin(), u.end())};
}

ScalarField Discretization::solve_dirichlet(std::span<const double> gamma_values,
                                            std::span<const double> sigma_values,
                                            const ScalarFunction& f) const {
  if (gamma_values.size() != gamma_nodes_.size() || sigma_values.size() != sigma_nodes_.size()) {
    throw SolverError("boundary value arrays do not match the boundary loops");
  }
  Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh_->nodes.size()));
  for (std::size_t k = 0; k < gamma_nodes_.size(); ++k) values[gamma_nodes_[k]] = gamma_values[k];
  for (std::size_t k = 0; k < sigma_nodes_.size(); ++k) values[sigma_nodes_[k]] = sigma_values[k];
  const Eigen::VectorXd w = both_solver_->solve(load_vector(f), values);
  return {mesh_, std::vector<double>(w.begin(), w.end())};
}

std::vector<double> Discretization::normal_flux(const ScalarField& field, const ScalarFunction& f,
                                                BoundaryTag tag) const {
  if (field.values.size() != mesh_->nodes.size()) throw SolverError("field does not match mesh");
  const auto& loop = boundary_loop(tag);
  const std::size_t nl = loop.size();
  Eigen::VectorXd a_u(static_cast<Eigen::Index>(mesh_->nodes.size()));
  matvec(stiffness_, field.values.data(), a_u.data());
  const Eigen::VectorXd load = load_vector(f);

  Eigen::VectorXd r(static_cast<Eigen::Index>(nl));
  for (std::size_t k = 0; k < nl; ++k) r[static_cast<Eigen::Index>(k)] = a_u[loop[k]] - load[loop[k]];

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * nl);
  for (std::size_t k = 0; k < nl; ++k) {
    const auto i = static_cast<int>(k), j = static_cast<int>((k + 1) % nl);
    const double len = norm(mesh_->nodes[loop[(k + 1) % nl]] - mesh_->nodes[loop[k]]);
    trip.emplace_back(i, i, len / 3.0);
    trip.emplace_back(j, j, len / 3.0);
    trip.emplace_back(i, j, len / 6.0);
    trip.emplace_back(j, i, len / 6.0);
  }
  Eigen::SparseMatrix<double> m(static_cast<int>(nl), static_cast<int>(nl));
  m.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(m);
  if (ldlt.info() != Eigen::Success) throw SolverError("boundary mass matrix is singular");
  const Eigen::VectorXd q = ldlt.solve(r);
  return {q.begin(), q.end()};
}

double Discretization::boundary_integral(BoundaryTag tag, std::span<const double> values) const {
  const auto& loop = boundary_loop(tag);
  if (values.size() != loop.size()) throw SolverError("integrand does not match the boundary loop");
  const std::size_t nl = loop.size();
  double s = 0.0;
  for (std::size_t k = 0; k < nl; ++k) {
    const double len = norm(mesh_->nodes[loop[(k + 1) % nl]] - mesh_->nodes[loop[k]]);
    s += 0.5 * len * (values[k] + values[(k + 1) % nl]);
  }
  return s;
}

std::vector<Vec2> Discretization::triangle_gradient(const ScalarField& field) const {
  if (field.values.size() != mesh_->nodes.size()) throw SolverError("field does not match mesh");
  std::vector<Vec2> g(mesh_->triangles.size());
  for (std::size_t t = 0; t < g.size(); ++t) {
    const auto& tri = mesh_->triangles[t];
    for (int i = 0; i < 3; ++i) {
      g[t].x += field.values[tri[i]] * gx_[i][t];
      g[t].y += field.values[tri[i]] * gy_[i][t];
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Free functions

ScalarField solve_mixed(const MeshPtr& mesh, const ScalarFunction& f, const ScalarFunction& g,
                        const ScalarFunction& h) {
  return Discretization(mesh).solve_mixed(f, g, h);
}

ScalarField solve_dirichlet(const MeshPtr& mesh, std::span<const double> gamma_values,
                            std::span<const double> sigma_values, const ScalarFunction& f) {
  return Discretization(mesh).solve_dirichlet(gamma_values, sigma_values, f);
}

std::vector<double> normal_flux_on_gamma(const ScalarField& field, const ScalarFunction& f) {
  return Discretization(field.mesh).normal_flux(field, f, BoundaryTag::Gamma);
}

std::vector<double> normal_flux_on_sigma(const ScalarField& field, const ScalarFunction& f) {
  return Discretization(field.mesh).normal_flux(field, f, BoundaryTag::Sigma);
}

double gamma_integral(const Mesh& mesh, std::span<const double> values) {
  const auto loop = boundary_nodes(mesh, BoundaryTag::Gamma);
  if (values.size() != loop.size()) throw SolverError("integrand does not match the Gamma loop");
  const std::size_t nl = loop.size();
  double s = 0.0;
  for (std::size_t k = 0; k < nl; ++k) {
    const double len = norm(mesh.nodes[loop[(k + 1) % nl]] - mesh.nodes[loop[k]]);
    s += 0.5 * len * (values[k] + values[(k + 1) % nl]);
  }
  return s;
}

std::vector<Vec2> triangle_gradient(const ScalarField& field) {
  const Mesh& mesh = *field.mesh;
  if (field.values.size() != mesh.nodes.size()) throw SolverError("field does not match mesh");
  std::vector<Vec2> g(mesh.triangles.size());
  for (std::size_t t = 0; t < g.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Point2 p0 = mesh.nodes[tri[0]], p1 = mesh.nodes[tri[1]], p2 = mesh.nodes[tri[2]];
    const double det = orient2d(p0, p1, p2);
    const double u0 = field.values[tri[0]], u1 = field.values[tri[1]], u2 = field.values[tri[2]];
    // Solve [p1-p0; p2-p0] grad = [u1-u0; u2-u0].
    const Vec2 e1 = p1 - p0, e2 = p2 - p0;
    g[t] = {((u1 - u0) * e2.y - (u2 - u0) * e1.y) / det, ((u2 - u0) * e1.x - (u1 - u0) * e2.x) / det};
  }
  return g;
}

ScalarField interpolate(const MeshPtr& mesh, const ScalarFunction& fn) {
  ScalarField out{mesh, std::vector<double>(mesh->nodes.size())};
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = fn.value(mesh->nodes[i]);
  return out;
}

double l2_error(const Discretization& disc, const ScalarField& field, const ScalarFunction& exact) {
  // Degree-5 rule (7 points) in barycentric coordinates.
  const double a1 = 0.059715871789770, b1 = 0.470142064105115;
  const double a2 = 0.797426985353087, b2 = 0.101286507323456;
  const double w0 = 0.225, w1 = 0.132394152788506, w2 = 0.125939180544827;
  struct QP {
    double l0, l1, l2, w;
  };
  const QP rule[7] = {{1.0 / 3, 1.0 / 3, 1.0 / 3, w0}, {a1, b1, b1, w1}, {b1, a1, b1, w1},
                      {b1, b1, a1, w1},                {a2, b2, b2, w2}, {b2, a2, b2, w2},
                      {b2, b2, a2, w2}};
  const Mesh& mesh = disc.mesh();
  double s = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Point2 p0 = mesh.nodes[tri[0]], p1 = mesh.nodes[tri[1]], p2 = mesh.nodes[tri[2]];
    for (const QP& q : rule) {
      const Point2 x = q.l0 * p0 + q.l1 * p1 + q.l2 * p2;
      const double uh = q.l0 * field.values[tri[0]] + q.l1 * field.values[tri[1]] + q.l2 * field.values[tri[2]];
      const double e = uh - exact.value(x);
      s += q.w * disc.area(t) * e * e;
    }
  }
  return std::sqrt(s);
}

void write_field_csv(std::ostream& os, const ScalarField& field) {
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    os << i << ',' << detail::format_real(field.values[i]) << '\n';
  }
}

}  // namespace bernoulli::fem
