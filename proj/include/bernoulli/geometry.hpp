#pragma once

// Star-shaped free boundaries r(theta) * (cos theta, sin theta) given by a
// truncated Fourier series, and the fixed inner boundary.

#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "bernoulli/point.hpp"

namespace bernoulli {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// r(theta) = a0 + sum_{i=1}^N a_i cos(i theta) + b_i sin(i theta).
class FourierBoundary {
 public:
  FourierBoundary() : a_{1.0} {}
  // a holds a0..aN, b holds b1..bN.
  FourierBoundary(std::vector<double> a, std::vector<double> b);

  // Constant radius.
  static FourierBoundary circle(double radius, int order = 0);
  // Unpacks (a0, ..., aN, b1, ..., bN).
  static FourierBoundary from_coefficients(std::span<const double> packed, int order);

  int order() const { return static_cast<int>(b_.size()); }
  std::size_t dimension() const { return a_.size() + b_.size(); }
  const std::vector<double>& a() const { return a_; }
  const std::vector<double>& b() const { return b_; }
  std::vector<double> coefficients() const;

  double radius(double theta) const;
  double radius_derivative(double theta) const;
  Point2 point(double theta) const;

 private:
  std::vector<double> a_;
  std::vector<double> b_;
};

double eval_radius(const FourierBoundary& boundary, double theta);
double eval_radius_derivative(const FourierBoundary& boundary, double theta);

// Unit vector; eval_normal is the only producer.
struct UnitVector2 {
  double x = 1.0;
  double y = 0.0;
  Vec2 vec() const { return {x, y}; }
};

// Outward unit normal (r xhat - r'(theta) tauhat) / sqrt(r^2 + r'^2).
UnitVector2 eval_normal(const FourierBoundary& boundary, double theta);

struct QuadraturePoint {
  Point2 point;
  double weight = 0.0;
};

// Composite trapezoid rule in theta with surface element sqrt(r^2 + r'^2).
std::vector<QuadraturePoint> boundary_quadrature(const FourierBoundary& boundary, int num_points);

// `count` points at theta_k = 2 pi k / count. Throws InfeasibleShape if r <= 0 at a sample.
std::vector<Point2> sample_polyline(const FourierBoundary& boundary, int count);

// Polar angle in [0, 2 pi). Throws std::invalid_argument at the origin.
double polar_angle(Point2 p);

// r and r' at many angles at once (uses the SIMD Fourier kernel).
void eval_radius_batch(const FourierBoundary& boundary, std::span<const double> theta,
                       std::span<double> r, std::span<double> dr);

struct PolygonSigma {
  std::vector<Point2> vertices;
};

struct CircleSigma {
  Point2 center;
  double radius = 0.0;
};

// Fixed inner boundary: a simple closed polygon or a circle.
class FixedBoundarySpec {
 public:
  using Variant = std::variant<PolygonSigma, CircleSigma>;

  explicit FixedBoundarySpec(PolygonSigma polygon);
  explicit FixedBoundarySpec(CircleSigma circle);

  // The boundary of (-0.25,0.25)^2 minus [0,0.25)^2.
  static FixedBoundarySpec l_shape();

  const Variant& variant() const { return spec_; }
  double perimeter() const;

  // Counterclockwise polyline with `count` points. Polygon corners are always
  // sampled; the remaining points are spread over edges by length.
  std::vector<Point2> sample(int count) const;

 private:
  Variant spec_;
};

// Dense checks: r > 0 on max(16N+64, 256) angles and the curve strictly
// encloses the fixed boundary. Throws InfeasibleShape.
void check_admissible(const FourierBoundary& boundary, const FixedBoundarySpec& sigma);
bool is_admissible(const FourierBoundary& boundary, const FixedBoundarySpec& sigma);

// Polygon utilities on closed polylines (last point connects to the first).
double signed_area(std::span<const Point2> polygon);
double perimeter(std::span<const Point2> polygon);
bool point_in_polygon(Point2 p, std::span<const Point2> polygon);
bool is_simple(std::span<const Point2> polygon);
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d);

// One `x,y` line per point, closed implicitly.
void write_polyline_csv(std::ostream& os, std::span<const Point2> polyline);
std::vector<Point2> read_polyline_csv(std::istream& is);

}  // namespace bernoulli
