#include "bernoulli/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bernoulli/errors.hpp"
#include "bernoulli/simd/kernels.hpp"
#include "text_util.hpp"

namespace bernoulli {

FourierBoundary::FourierBoundary(std::vector<double> a, std::vector<double> b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() != b_.size() + 1) {
    throw std::invalid_argument("FourierBoundary: need N+1 cosine and N sine coefficients");
  }
}

FourierBoundary FourierBoundary::circle(double radius, int order) {
  std::vector<double> a(static_cast<std::size_t>(order) + 1, 0.0);
  a[0] = radius;
  return {std::move(a), std::vector<double>(static_cast<std::size_t>(order), 0.0)};
}

FourierBoundary FourierBoundary::from_coefficients(std::span<const double> packed, int order) {
  const auto n = static_cast<std::size_t>(order);
  if (order < 0 || packed.size() != 2 * n + 1) {
    throw std::invalid_argument("FourierBoundary: packed vector must have 2N+1 entries");
  }
  return {std::vector<double>(packed.begin(), packed.begin() + n + 1),
          std::vector<double>(packed.begin() + n + 1, packed.end())};
}

std::vector<double> FourierBoundary::coefficients() const {
  std::vector<double> x(a_);
  x.insert(x.end(), b_.begin(), b_.end());
  return x;
}

double FourierBoundary::radius(double theta) const {
  double r = a_[0];
  for (std::size_t i = 1; i < a_.size(); ++i) {
    const double it = static_cast<double>(i) * theta;
    r += a_[i] * std::cos(it) + b_[i - 1] * std::sin(it);
  }
  return r;
}

double FourierBoundary::radius_derivative(double theta) const {
  double dr = 0.0;
  for (std::size_t i = 1; i < a_.size(); ++i) {
    const double k = static_cast<double>(i);
    dr += k * (b_[i - 1] * std::cos(k * theta) - a_[i] * std::sin(k * theta));
  }
  return dr;
}

Point2 FourierBoundary::point(double theta) const {
  const double r = radius(theta);
  return {r * std::cos(theta), r * std::sin(theta)};
}

double eval_radius(const FourierBoundary& boundary, double theta) { return boundary.radius(theta); }

double eval_radius_derivative(const FourierBoundary& boundary, double theta) {
  return boundary.radius_derivative(theta);
}

UnitVector2 eval_normal(const FourierBoundary& boundary, double theta) {
  const double r = boundary.radius(theta);
  const double dr = boundary.radius_derivative(theta);
  const double c = std::cos(theta), s = std::sin(theta);
  // r * (c, s) - r' * (-s, c)
  const double nx = r * c + dr * s;
  const double ny = r * s - dr * c;
  const double len = std::hypot(nx, ny);
  return {nx / len, ny / len};
}

void eval_radius_batch(const FourierBoundary& boundary, std::span<const double> theta,
                       std::span<double> r, std::span<double> dr) {
  if (r.size() != theta.size() || (!dr.empty() && dr.size() != theta.size())) {
    throw std::invalid_argument("eval_radius_batch: size mismatch");
  }
  std::vector<double> c(theta.size()), s(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    c[i] = std::cos(theta[i]);
    s[i] = std::sin(theta[i]);
  }
  simd::kernels().fourier_series(boundary.a().data(), boundary.a().size(), boundary.b().data(),
                                 boundary.b().size(), c.data(), s.data(), theta.size(), r.data(),
                                 dr.empty() ? nullptr : dr.data());
}

namespace {

std::vector<double> uniform_angles(int count) {
  std::vector<double> theta(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) theta[k] = kTwoPi * k / count;
  return theta;
}

}  // namespace

std::vector<QuadraturePoint> boundary_quadrature(const FourierBoundary& boundary, int num_points) {
  if (num_points < 8) throw std::invalid_argument("boundary_quadrature: need at least 8 points");
  const auto theta = uniform_angles(num_points);
  std::vector<double> r(theta.size()), dr(theta.size());
  eval_radius_batch(boundary, theta, r, dr);
  const double h = kTwoPi / num_points;
  std::vector<QuadraturePoint> q(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    q[k].point = {r[k] * std::cos(theta[k]), r[k] * std::sin(theta[k])};
    q[k].weight = h * std::sqrt(r[k] * r[k] + dr[k] * dr[k]);
  }
  return q;
}

std::vector<Point2> sample_polyline(const FourierBoundary& boundary, int count) {
  if (count < 8) throw std::invalid_argument("sample_polyline: need at least 8 points");
  std::vector<Point2> pts(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double theta = kTwoPi * k / count;
    const double r = boundary.radius(theta);
    if (!(r > 0.0)) {
      throw InfeasibleShape("free boundary radius is not positive at theta = " +
                            detail::format_real(theta));
    }
    pts[k] = {r * std::cos(theta), r * std::sin(theta)};
  }
  return pts;
}

double polar_angle(Point2 p) {
  if (p.x == 0.0 && p.y == 0.0) throw std::invalid_argument("polar_angle: origin has no angle");
  double t = std::atan2(p.y, p.x);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

// ---------------------------------------------------------------------------
// Fixed boundary

FixedBoundarySpec::FixedBoundarySpec(PolygonSigma polygon) : spec_(std::move(polygon)) {
  auto& v = std::get<PolygonSigma>(spec_).vertices;
  if (v.size() < 3) throw std::invalid_argument("fixed boundary polygon needs >= 3 vertices");
  if (!is_simple(v)) throw std::invalid_argument("fixed boundary polygon is not simple");
  if (signed_area(v) < 0.0) std::reverse(v.begin() + 1, v.end());
}

FixedBoundarySpec::FixedBoundarySpec(CircleSigma circle) : spec_(circle) {
  if (!(circle.radius > 0.0)) throw std::invalid_argument("fixed boundary circle radius must be > 0");
}

FixedBoundarySpec FixedBoundarySpec::l_shape() {
  return FixedBoundarySpec(PolygonSigma{{{-0.25, -0.25},
                                         {0.25, -0.25},
                                         {0.25, 0.0},
                                         {0.0, 0.0},
                                         {0.0, 0.25},
                                         {-0.25, 0.25}}});
}

double FixedBoundarySpec::perimeter() const {
  if (const auto* c = std::get_if<CircleSigma>(&spec_)) return kTwoPi * c->radius;
  return bernoulli::perimeter(std::get<PolygonSigma>(spec_).vertices);
}

std::vector<Point2> FixedBoundarySpec::sample(int count) const {
  if (const auto* c = std::get_if<CircleSigma>(&spec_)) {
    if (count < 3) throw std::invalid_argument("fixed boundary sample count too small");
    std::vector<Point2> pts(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
      const double t = kTwoPi * k / count;
      pts[k] = {c->center.x + c->radius * std::cos(t), c->center.y + c->radius * std::sin(t)};
    }
    return pts;
  }
  const auto& v = std::get<PolygonSigma>(spec_).vertices;
  const std::size_t nv = v.size();
  if (count < static_cast<int>(nv)) {
    throw std::invalid_argument("fixed boundary sample count is below the polygon vertex count");
  }
  // Largest-remainder apportionment of `count` subdivisions over the edges, at least one each.
  const double total = perimeter();
  std::vector<int> segs(nv, 1);
  std::vector<double> remainder(nv, 0.0);
  int assigned = 0;
  for (std::size_t e = 0; e < nv; ++e) {
    const double ideal = count * norm(v[(e + 1) % nv] - v[e]) / total;
    segs[e] = std::max(1, static_cast<int>(std::floor(ideal)));
    remainder[e] = ideal - std::floor(ideal);
    assigned += segs[e];
  }
  std::vector<std::size_t> order(nv);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return remainder[i] > remainder[j]; });
  for (std::size_t k = 0; assigned < count; k = (k + 1) % nv) {
    ++segs[order[k]];
    ++assigned;
  }
  for (std::size_t k = 0; assigned > count; k = (k + 1) % nv) {
    const std::size_t e = order[nv - 1 - k];
    if (segs[e] > 1) {
      --segs[e];
      --assigned;
    }
  }
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (std::size_t e = 0; e < nv; ++e) {
    const Point2 a = v[e], b = v[(e + 1) % nv];
    for (int s = 0; s < segs[e]; ++s) {
      const double t = static_cast<double>(s) / segs[e];
      pts.push_back(a + t * (b - a));
    }
  }
  return pts;
}

void check_admissible(const FourierBoundary& boundary, const FixedBoundarySpec& sigma) {
  const int samples = std::max(16 * boundary.order() + 64, 256);
  const auto theta = uniform_angles(samples);
  std::vector<double> r(theta.size());
  eval_radius_batch(boundary, theta, r, {});
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (!(r[k] > 0.0)) {
      throw InfeasibleShape("free boundary radius is not positive at theta = " +
                            detail::format_real(theta[k]));
    }
  }
  const int sigma_samples = std::max(512, 4 * samples);
  for (const Point2& p : sigma.sample(sigma_samples)) {
    if (p.x == 0.0 && p.y == 0.0) continue;
    if (!(norm(p) < boundary.radius(polar_angle(p)))) {
      throw InfeasibleShape("free boundary does not enclose the fixed boundary near (" +
                            detail::format_real(p.x) + ", " + detail::format_real(p.y) + ")");
    }
  }
}

bool is_admissible(const FourierBoundary& boundary, const FixedBoundarySpec& sigma) {
  try {
    check_admissible(boundary, sigma);
    return true;
  } catch (const InfeasibleShape&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Polygons

double signed_area(std::span<const Point2> polygon) {
  double s = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) s += cross(polygon[i], polygon[(i + 1) % n]);
  return 0.5 * s;
}

double perimeter(std::span<const Point2> polygon) {
  double s = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) s += norm(polygon[(i + 1) % n] - polygon[i]);
  return s;
}

bool point_in_polygon(Point2 p, std::span<const Point2> polygon) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = polygon[i], b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  const int o1 = sign(orient2d(a, b, c)), o2 = sign(orient2d(a, b, d));
  const int o3 = sign(orient2d(c, d, a)), o4 = sign(orient2d(c, d, b));
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool is_simple(std::span<const Point2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (polygon[i] == polygon[(i + 1) % n]) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = polygon[i], b = polygon[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      const Point2 c = polygon[j], d = polygon[(j + 1) % n];
      if (adjacent) {
        // Adjacent edges share one endpoint; they must not fold back onto each other.
        const Point2 shared = (j == i + 1) ? b : a;
        const Point2 p = (j == i + 1) ? a : b;
        const Point2 q = (j == i + 1) ? d : c;
        if (sign(orient2d(p, shared, q)) == 0 && dot(p - shared, q - shared) > 0.0) return false;
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

void write_polyline_csv(std::ostream& os, std::span<const Point2> polyline) {
  for (const Point2& p : polyline) {
    os << detail::format_real(p.x) << ',' << detail::format_real(p.y) << '\n';
  }
}

std::vector<Point2> read_polyline_csv(std::istream& is) {
  std::vector<Point2> pts;
  std::string line;
  while (std::getline(is, line)) {
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    const auto comma = t.find(',');
    if (comma == std::string_view::npos) throw std::invalid_argument("polyline CSV: missing comma");
    pts.push_back({std::stod(std::string(t.substr(0, comma))),
                   std::stod(std::string(t.substr(comma + 1)))});
  }
  return pts;
}

}  // namespace bernoulli
