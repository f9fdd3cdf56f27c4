#include "bernoulli/meshing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_set>

#include "bernoulli/errors.hpp"
#include "bernoulli/geometry.hpp"

namespace bernoulli {

std::string_view to_string(BoundaryTag tag) {
  return tag == BoundaryTag::Gamma ? "GAMMA" : "SIGMA";
}

BoundaryTag parse_boundary_tag(std::string_view text) {
  if (text == "GAMMA" || text == "0") return BoundaryTag::Gamma;
  if (text == "SIGMA" || text == "1") return BoundaryTag::Sigma;
  throw MeshError("unknown boundary tag '" + std::string(text) + "'");
}

double Mesh::triangle_area(std::size_t t) const {
  const auto& tri = triangles[t];
  return 0.5 * orient2d(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
}

namespace {

// Predicates evaluate on lexicographically sorted points and correct the sign by
// the permutation parity, so every permutation of the same points yields a
// consistent sign regardless of rounding or floating-point contraction.
bool lex_less(Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

template <std::size_t N>
int sort_with_parity(std::array<Point2, N>& p) {
  int parity = 1;
  for (std::size_t i = 1; i < N; ++i) {
    for (std::size_t j = i; j > 0 && lex_less(p[j], p[j - 1]); --j) {
      std::swap(p[j], p[j - 1]);
      parity = -parity;
    }
  }
  return parity;
}

// Positive when a, b, c are counterclockwise.
double orient(Point2 a, Point2 b, Point2 c) {
  std::array<Point2, 3> p{a, b, c};
  const int parity = sort_with_parity(p);
  const long double ax = p[0].x, ay = p[0].y;
  const long double det = (p[1].x - ax) * (p[2].y - ay) - (p[1].y - ay) * (p[2].x - ax);
  return parity * static_cast<double>(det);
}

// Positive when d lies inside the circumcircle of the counterclockwise triangle abc.
double incircle(Point2 a, Point2 b, Point2 c, Point2 d) {
  std::array<Point2, 4> p{a, b, c, d};
  const int parity = sort_with_parity(p);
  const long double dx = p[3].x, dy = p[3].y;
  const long double adx = p[0].x - dx, ady = p[0].y - dy;
  const long double bdx = p[1].x - dx, bdy = p[1].y - dy;
  const long double cdx = p[2].x - dx, cdy = p[2].y - dy;
  const long double alift = adx * adx + ady * ady;
  const long double blift = bdx * bdx + bdy * bdy;
  const long double clift = cdx * cdx + cdy * cdy;
  const long double det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                          clift * (adx * bdy - bdx * ady);
  return parity * static_cast<double>(det);
}

Point2 circumcenter(Point2 a, Point2 b, Point2 c) {
  const Vec2 ab = b - a, ac = c - a;
  const double d = 2.0 * cross(ab, ac);
  const double lb = norm2(ab), lc = norm2(ac);
  return {a.x + (ac.y * lb - ab.y * lc) / d, a.y + (ab.x * lc - ac.x * lb) / d};
}

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

class Refiner {
 public:
  Refiner(std::span<const Point2> gamma, std::span<const Point2> sigma, const MeshOptions& options)
      : options_(options), gamma_(gamma.begin(), gamma.end()), sigma_(sigma.begin(), sigma.end()) {
    cos_min_angle_ = std::cos(options.min_angle_deg * std::numbers::pi / 180.0);
  }

  Mesh run() {
    init_super_triangle();
    const int gamma_base = static_cast<int>(pts_.size());
    for (const Point2& p : gamma_) insert_point(p);
    const int sigma_base = static_cast<int>(pts_.size());
    for (const Point2& p : sigma_) insert_point(p);

    add_loop(gamma_base, static_cast<int>(gamma_.size()), BoundaryTag::Gamma, signed_area(gamma_) > 0);
    add_loop(sigma_base, static_cast<int>(sigma_.size()), BoundaryTag::Sigma, signed_area(sigma_) > 0);
    for (std::size_t s = 0; s < segs_.size(); ++s) seg_queue_.push_back(static_cast<int>(s));
    split_encroached_segments();

    // All segments are now Delaunay edges, so domain membership can be read off
    // centroids once and inherited by later insertions.
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (!tris_[t].alive) continue;
      tris_[t].inside = centroid_in_domain(static_cast<int>(t));
      if (tris_[t].inside) bad_queue_.push_back(static_cast<int>(t));
    }
    inherit_inside_ = true;
    refine();
    return extract(gamma_base, sigma_base);
  }

 private:
  struct Tri {
    std::array<int, 3> v{};
    std::array<int, 3> nb{-1, -1, -1};  // nb[i] is across the edge opposite v[i]
    bool alive = true;
    bool inside = false;
  };
  struct Seg {
    int a = 0;
    int b = 0;
    BoundaryTag tag = BoundaryTag::Gamma;
    bool alive = true;
  };

  void init_super_triangle() {
    double xmin = std::numeric_limits<double>::max(), ymin = xmin;
    double xmax = -xmin, ymax = -xmin;
    for (const Point2& p : gamma_) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
    const double d = std::max({xmax - xmin, ymax - ymin, 1e-3});
    pts_ = {{cx - 50 * d, cy - 40 * d}, {cx + 50 * d, cy - 40 * d}, {cx, cy + 60 * d}};
    vert_tri_ = {0, 0, 0};
    tris_.push_back(Tri{{0, 1, 2}, {-1, -1, -1}, true, false});
  }

  void add_loop(int base, int n, BoundaryTag tag, bool ccw) {
    for (int i = 0; i < n; ++i) {
      int a = base + i, b = base + (i + 1) % n;
      if (!ccw) std::swap(a, b);
      segs_.push_back({a, b, tag, true});
      seg_edges_.insert(edge_key(a, b));
    }
  }

  const Point2& P(int v) const { return pts_[v]; }

  int locate(Point2 p) const {
    int t = last_;
    if (t < 0 || !tris_[t].alive) {
      t = -1;
      for (std::size_t i = tris_.size(); i-- > 0;) {
        if (tris_[i].alive) {
          t = static_cast<int>(i);
          break;
        }
      }
    }
    const std::size_t max_steps = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < max_steps; ++step) {
      const Tri& tri = tris_[t];
      int next = -1;
      for (int i = 0; i < 3; ++i) {
        if (orient(P(tri.v[(i + 1) % 3]), P(tri.v[(i + 2) % 3]), p) < 0.0) {
          next = tri.nb[i];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    // Walk did not terminate (degenerate configuration); fall back to a scan.
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      const Tri& tri = tris_[i];
      if (!tri.alive) continue;
      if (orient(P(tri.v[0]), P(tri.v[1]), p) >= 0.0 &&
          orient(P(tri.v[1]), P(tri.v[2]), p) >= 0.0 &&
          orient(P(tri.v[2]), P(tri.v[0]), p) >= 0.0) {
        return static_cast<int>(i);
      }
    }
    throw MeshError("point location failed");
  }

  bool in_cavity(int t) const { return t >= 0 && cavity_mark_[t] == stamp_; }

  // Bowyer-Watson insertion. Returns the new vertex index.
  int insert_point(Point2 p) {
    const int t0 = locate(p);
    for (int v : tris_[t0].v) {
      if (norm2(P(v) - p) <= 1e-24 * std::max(1.0, norm2(p))) {
        throw MeshError("duplicate point in triangulation input");
      }
    }
    const int pid = static_cast<int>(pts_.size());
    pts_.push_back(p);
    vert_tri_.push_back(-1);

    ++stamp_;
    cavity_mark_.resize(tris_.size(), 0);
    cavity_.clear();
    cavity_.push_back(t0);
    cavity_mark_[t0] = stamp_;
    for (std::size_t k = 0; k < cavity_.size(); ++k) {
      const Tri& tri = tris_[cavity_[k]];
      for (int n : tri.nb) {
        if (n < 0 || in_cavity(n)) continue;
        const Tri& nt = tris_[n];
        if (incircle(P(nt.v[0]), P(nt.v[1]), P(nt.v[2]), p) > 0.0) {
          cavity_mark_[n] = stamp_;
          cavity_.push_back(n);
        }
      }
    }
    make_star_shaped(t0, p);

    // Fan the cavity boundary to p.
    struct BEdge {
      int a, b, outer, old;
    };
    std::vector<BEdge> boundary;
    for (int t : cavity_) {
      if (!in_cavity(t)) continue;
      const Tri& tri = tris_[t];
      for (int i = 0; i < 3; ++i) {
        if (!in_cavity(tri.nb[i])) {
          boundary.push_back({tri.v[(i + 1) % 3], tri.v[(i + 2) % 3], tri.nb[i], t});
        }
      }
    }
    start_of_.resize(pts_.size(), -1);
    end_of_.resize(pts_.size(), -1);
    const int first_new = static_cast<int>(tris_.size());
    for (const BEdge& e : boundary) {
      const int nt = static_cast<int>(tris_.size());
      Tri tri;
      tri.v = {e.a, e.b, pid};
      tri.nb = {-1, -1, e.outer};
      tri.inside = inherit_inside_ && tris_[e.old].inside;
      tris_.push_back(tri);
      if (e.outer >= 0) {
        for (int& n : tris_[e.outer].nb) {
          if (n == e.old) n = nt;
        }
      }
      start_of_[e.a] = nt;
      end_of_[e.b] = nt;
    }
    for (int nt = first_new; nt < static_cast<int>(tris_.size()); ++nt) {
      Tri& tri = tris_[nt];
      tri.nb[0] = start_of_[tri.v[1]];
      tri.nb[1] = end_of_[tri.v[0]];
      vert_tri_[tri.v[0]] = nt;
      vert_tri_[tri.v[1]] = nt;
      vert_tri_[pid] = nt;
    }
    for (const BEdge& e : boundary) {
      start_of_[e.a] = -1;
      end_of_[e.b] = -1;
    }
    for (int t : cavity_) {
      if (in_cavity(t)) tris_[t].alive = false;
    }
    last_ = first_new;
    if (inherit_inside_) {
      for (int nt = first_new; nt < static_cast<int>(tris_.size()); ++nt) {
        if (tris_[nt].inside) bad_queue_.push_back(nt);
      }
    }
    return pid;
  }

  // Drops cavity triangles whose outer edges are not visible from p, so that
  // the fan to p has only positively oriented triangles.
  void make_star_shaped(int t0, Point2 p) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k = 0; k < cavity_.size(); ++k) {
        const int t = cavity_[k];
        if (!in_cavity(t)) continue;
        const Tri& tri = tris_[t];
        for (int i = 0; i < 3 && in_cavity(t); ++i) {
          const int n = tri.nb[i];
          if (in_cavity(n)) continue;
          if (orient(P(tri.v[(i + 1) % 3]), P(tri.v[(i + 2) % 3]), p) > 0.0) continue;
          if (t == t0) {
            if (n < 0) throw MeshError("point on the hull of the triangulation");
            cavity_mark_[n] = stamp_;
            if (std::find(cavity_.begin(), cavity_.end(), n) == cavity_.end()) cavity_.push_back(n);
          } else {
            cavity_mark_[t] = 0;
          }
          changed = true;
        }
      }
    }
  }

  bool edge_exists(int a, int b) const {
    const int start = vert_tri_[a];
    if (start < 0) return false;
    int t = start;
    for (std::size_t guard = 0; guard < 4096; ++guard) {
      const Tri& tri = tris_[t];
      int i = 0;
      while (tri.v[i] != a) ++i;
      if (tri.v[(i + 1) % 3] == b || tri.v[(i + 2) % 3] == b) return true;
      // Counterclockwise rotation about a: cross edge (a, v[i+1]).
      t = tri.nb[(i + 2) % 3];
      if (t < 0 || t == start) return false;
    }
    return false;
  }

  // Adjacent triangle across the directed edge (a, b), or -1.
  int triangle_with_edge(int a, int b) const {
    const int start = vert_tri_[a];
    int t = start;
    for (std::size_t guard = 0; guard < 4096 && t >= 0; ++guard) {
      const Tri& tri = tris_[t];
      int i = 0;
      while (tri.v[i] != a) ++i;
      if (tri.v[(i + 1) % 3] == b) return t;
      t = tri.nb[(i + 2) % 3];
      if (t == start) break;
    }
    return -1;
  }

  bool in_diametral_circle(const Seg& s, Point2 p) const {
    const Point2 mid = 0.5 * (P(s.a) + P(s.b));
    const double r2 = 0.25 * norm2(P(s.b) - P(s.a));
    return norm2(p - mid) < r2 * (1.0 - 1e-12);
  }

  bool segment_needs_split(const Seg& s) const {
    if (!edge_exists(s.a, s.b)) return true;
    for (auto [a, b] : {std::pair{s.a, s.b}, std::pair{s.b, s.a}}) {
      const int t = triangle_with_edge(a, b);
      if (t < 0) continue;
      for (int v : tris_[t].v) {
        if (v != a && v != b && in_diametral_circle(s, P(v))) return true;
      }
    }
    return false;
  }

  void split_segment(int s) {
    if (++steiner_ > options_.max_steiner_points) {
      throw MeshError("mesh refinement exceeded the Steiner point budget");
    }
    const Seg seg = segs_[s];
    segs_[s].alive = false;
    seg_edges_.erase(edge_key(seg.a, seg.b));
    const int m = insert_point(0.5 * (P(seg.a) + P(seg.b)));
    for (auto [a, b] : {std::pair{seg.a, m}, std::pair{m, seg.b}}) {
      segs_.push_back({a, b, seg.tag, true});
      seg_edges_.insert(edge_key(a, b));
      seg_queue_.push_back(static_cast<int>(segs_.size()) - 1);
    }
    queue_segments_encroached_by(P(m));
  }

  void queue_segments_encroached_by(Point2 p) {
    for (std::size_t s = 0; s < segs_.size(); ++s) {
      if (segs_[s].alive && in_diametral_circle(segs_[s], p)) seg_queue_.push_back(static_cast<int>(s));
    }
  }

  void split_encroached_segments() {
    while (!seg_queue_.empty()) {
      const int s = seg_queue_.front();
      seg_queue_.pop_front();
      if (segs_[s].alive && segment_needs_split(segs_[s])) split_segment(s);
    }
  }

  bool is_segment_edge(int a, int b) const { return seg_edges_.count(edge_key(a, b)) != 0; }

  bool is_bad(const Tri& tri) const {
    double l2[3];
    for (int i = 0; i < 3; ++i) l2[i] = norm2(P(tri.v[(i + 2) % 3]) - P(tri.v[(i + 1) % 3]));
    for (int i = 0; i < 3; ++i) {
      const int a = tri.v[(i + 1) % 3], b = tri.v[(i + 2) % 3];
      double target = options_.target_edge_length;
      if (options_.size_field) target = std::min(target, options_.size_field(0.5 * (P(a) + P(b))));
      if (l2[i] > target * target && !is_segment_edge(a, b)) return true;
    }
    const int k = static_cast<int>(std::min_element(l2, l2 + 3) - l2);
    const double lb = l2[(k + 1) % 3], lc = l2[(k + 2) % 3];
    const double cos_min = (lb + lc - l2[k]) / (2.0 * std::sqrt(lb * lc));
    return cos_min > cos_min_angle_ + 1e-12;
  }

  bool point_in_domain(Point2 p) const {
    return point_in_polygon(p, gamma_) && !point_in_polygon(p, sigma_);
  }

  bool centroid_in_domain(int t) const {
    const Tri& tri = tris_[t];
    for (int v : tri.v) {
      if (v < 3) return false;
    }
    return point_in_domain((1.0 / 3.0) * (P(tri.v[0]) + P(tri.v[1]) + P(tri.v[2])));
  }

  void refine() {
    while (!bad_queue_.empty()) {
      const int t = bad_queue_.front();
      bad_queue_.pop_front();
      if (!tris_[t].alive || !tris_[t].inside || !is_bad(tris_[t])) continue;
      const Tri tri = tris_[t];
      const Point2 c = circumcenter(P(tri.v[0]), P(tri.v[1]), P(tri.v[2]));

      std::vector<int> encroached;
      for (std::size_t s = 0; s < segs_.size(); ++s) {
        if (segs_[s].alive && in_diametral_circle(segs_[s], c)) encroached.push_back(static_cast<int>(s));
      }
      if (encroached.empty() && !point_in_domain(c)) {
        // Cannot happen while no segment is encroached; split the segment
        // separating the triangle from its circumcenter to stay safe.
        const Point2 g = (1.0 / 3.0) * (P(tri.v[0]) + P(tri.v[1]) + P(tri.v[2]));
        for (std::size_t s = 0; s < segs_.size(); ++s) {
          if (segs_[s].alive && segments_intersect(g, c, P(segs_[s].a), P(segs_[s].b))) {
            encroached.push_back(static_cast<int>(s));
            break;
          }
        }
        if (encroached.empty()) throw MeshError("circumcenter left the domain during refinement");
      }
      if (!encroached.empty()) {
        // Leave the triangle as it is rather than add boundary nodes.
        if (!options_.split_boundary_in_refinement) continue;
        for (int s : encroached) {
          if (segs_[s].alive) split_segment(s);
        }
        split_encroached_segments();
        if (tris_[t].alive) bad_queue_.push_back(t);
        continue;
      }
      if (++steiner_ > options_.max_steiner_points) {
        throw MeshError("mesh refinement exceeded the Steiner point budget");
      }
      insert_point(c);
    }
  }

  Mesh extract(int gamma_base, int sigma_base) const {
    Mesh mesh;
    std::vector<int> remap(pts_.size(), -1);
    std::vector<char> used(pts_.size(), 0);
    std::vector<int> kept;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (!tris_[t].alive) continue;
      const bool inside = centroid_in_domain(static_cast<int>(t));
      if (inside != tris_[t].inside) throw MeshError("inconsistent domain classification");
      if (!inside) continue;
      kept.push_back(static_cast<int>(t));
      for (int v : tris_[t].v) used[v] = 1;
    }
    for (std::size_t v = 3; v < pts_.size(); ++v) {
      if (!used[v]) {
        if (static_cast<int>(v) < sigma_base + static_cast<int>(sigma_.size())) {
          throw MeshError("boundary point missing from the triangulation");
        }
        continue;
      }
      remap[v] = static_cast<int>(mesh.nodes.size());
      mesh.nodes.push_back(pts_[v]);
    }
    mesh.triangles.reserve(kept.size());
    for (int t : kept) {
      const auto& v = tris_[t].v;
      mesh.triangles.push_back({remap[v[0]], remap[v[1]], remap[v[2]]});
    }
    // Boundary edges in loop order.
    std::vector<int> next(pts_.size(), -1);
    for (const Seg& s : segs_) {
      if (s.alive) next[s.a] = s.b;
    }
    for (auto [start, tag] : {std::pair{gamma_base, BoundaryTag::Gamma}, std::pair{sigma_base, BoundaryTag::Sigma}}) {
      int v = start;
      do {
        const int w = next[v];
        if (w < 0) throw MeshError("boundary loop is broken");
        mesh.boundary_edges.push_back({remap[v], remap[w], tag});
        v = w;
      } while (v != start);
    }
    return mesh;
  }

  MeshOptions options_;
  std::vector<Point2> gamma_;
  std::vector<Point2> sigma_;
  double cos_min_angle_ = 1.0;

  std::vector<Point2> pts_;
  std::vector<Tri> tris_;
  std::vector<int> vert_tri_;
  std::vector<Seg> segs_;
  std::unordered_set<std::uint64_t> seg_edges_;
  std::deque<int> seg_queue_;
  std::deque<int> bad_queue_;
  bool inherit_inside_ = false;
  int last_ = 0;
  std::size_t steiner_ = 0;

  std::vector<int> cavity_;
  std::vector<unsigned> cavity_mark_;
  unsigned stamp_ = 0;
  std::vector<int> start_of_;
  std::vector<int> end_of_;
};

void check_inputs(std::span<const Point2> gamma, std::span<const Point2> sigma) {
  if (gamma.size() < 3 || sigma.size() < 3) throw MeshError("boundary polylines need >= 3 points");
  if (!is_simple(gamma)) throw MeshError("Gamma polyline is not simple");
  if (!is_simple(sigma)) throw MeshError("Sigma polyline is not simple");
  for (const Point2& p : sigma) {
    if (!point_in_polygon(p, gamma)) throw MeshError("Sigma is not inside Gamma");
  }
  for (const Point2& p : gamma) {
    if (point_in_polygon(p, sigma)) throw MeshError("Gamma point inside Sigma");
  }
  const std::size_t ng = gamma.size(), ns = sigma.size();
  for (std::size_t i = 0; i < ng; ++i) {
    for (std::size_t j = 0; j < ns; ++j) {
      if (segments_intersect(gamma[i], gamma[(i + 1) % ng], sigma[j], sigma[(j + 1) % ns])) {
        throw MeshError("Gamma and Sigma polylines intersect");
      }
    }
  }
}

}  // namespace

Mesh triangulate(std::span<const Point2> gamma, std::span<const Point2> sigma,
                 const MeshOptions& options) {
  if (!(options.target_edge_length > 0.0)) throw MeshError("target edge length must be positive");
  if (!(options.min_angle_deg > 0.0 && options.min_angle_deg <= 30.0)) {
    throw MeshError("minimum angle bound must lie in (0, 30] degrees");
  }
  check_inputs(gamma, sigma);
  return Refiner(gamma, sigma, options).run();
}

std::vector<int> boundary_nodes(const Mesh& mesh, BoundaryTag tag) {
  std::vector<int> next(mesh.nodes.size(), -1);
  int start = -1;
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    if (e.tag != tag) continue;
    next[e.a] = e.b;
    if (start < 0 || e.a < start) start = e.a;
  }
  if (start < 0) throw MeshError("no boundary edges tagged " + std::string(to_string(tag)));
  std::vector<int> loop;
  int v = start;
  do {
    loop.push_back(v);
    v = next[v];
    if (v < 0 || loop.size() > mesh.nodes.size()) throw MeshError("boundary loop is broken");
  } while (v != start);
  return loop;
}

MeshQuality mesh_quality(const Mesh& mesh) {
  if (mesh.triangles.empty()) throw MeshError("mesh has no triangles");
  MeshQuality q;
  q.triangle_count = mesh.triangles.size();
  double min_angle = std::numbers::pi;
  for (const auto& tri : mesh.triangles) {
    for (int i = 0; i < 3; ++i) {
      const Point2 a = mesh.nodes[tri[i]];
      const Vec2 u = mesh.nodes[tri[(i + 1) % 3]] - a;
      const Vec2 w = mesh.nodes[tri[(i + 2) % 3]] - a;
      min_angle = std::min(min_angle, std::atan2(std::abs(cross(u, w)), dot(u, w)));
      q.max_edge = std::max(q.max_edge, norm(u));
    }
  }
  q.min_angle_deg = min_angle * 180.0 / std::numbers::pi;
  return q;
}

void validate_mesh(const Mesh& mesh) {
  const int n = static_cast<int>(mesh.nodes.size());
  std::unordered_set<std::uint64_t> seen;
  // Directed edges of all triangles.
  std::unordered_set<std::uint64_t> directed;
  auto dkey = [](int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  };
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int v : tri) {
      if (v < 0 || v >= n) throw MeshError("triangle references a missing node");
    }
    if (!(mesh.triangle_area(t) > 0.0)) throw MeshError("triangle with non-positive area");
    for (int i = 0; i < 3; ++i) {
      if (!directed.insert(dkey(tri[i], tri[(i + 1) % 3])).second) {
        throw MeshError("edge shared by two triangles with the same orientation");
      }
    }
  }
  // Boundary edges are exactly the edges with one incident triangle.
  std::size_t boundary_count = 0;
  for (const auto& tri : mesh.triangles) {
    for (int i = 0; i < 3; ++i) {
      if (!directed.count(dkey(tri[(i + 1) % 3], tri[i]))) ++boundary_count;
    }
  }
  if (boundary_count != mesh.boundary_edges.size()) {
    throw MeshError("boundary edge list does not match the triangulation boundary");
  }
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    const bool forward = directed.count(dkey(e.a, e.b)) != 0;
    const bool backward = directed.count(dkey(e.b, e.a)) != 0;
    if (forward == backward) throw MeshError("boundary edge does not belong to exactly one triangle");
    // Domain is left of Gamma edges and right of Sigma edges.
    if ((e.tag == BoundaryTag::Gamma) != forward) throw MeshError("boundary edge orientation mismatch");
  }
  const auto g = boundary_nodes(mesh, BoundaryTag::Gamma);
  const auto s = boundary_nodes(mesh, BoundaryTag::Sigma);
  std::size_t gamma_edges = 0;
  for (const BoundaryEdge& e : mesh.boundary_edges) gamma_edges += e.tag == BoundaryTag::Gamma;
  if (g.size() != gamma_edges || s.size() != mesh.boundary_edges.size() - gamma_edges) {
    throw MeshError("boundary edges do not form exactly two loops");
  }
  std::unordered_set<int> gset(g.begin(), g.end());
  for (int v : s) {
    if (gset.count(v)) throw MeshError("Gamma and Sigma loops share a node");
  }
  std::vector<Point2> gpoly, spoly;
  for (int v : g) gpoly.push_back(mesh.nodes[v]);
  for (int v : s) spoly.push_back(mesh.nodes[v]);
  if (!(signed_area(gpoly) > 0.0) || !(signed_area(spoly) > 0.0)) {
    throw MeshError("boundary loops are not counterclockwise");
  }
  if (!point_in_polygon(spoly.front(), gpoly)) throw MeshError("Gamma loop does not enclose Sigma");
}

Mesh displaced(const Mesh& mesh, std::span<const double> dx, std::span<const double> dy, double t) {
  if (dx.size() != mesh.nodes.size() || dy.size() != mesh.nodes.size()) {
    throw std::invalid_argument("displaced: field size does not match node count");
  }
  Mesh out = mesh;
  for (std::size_t i = 0; i < out.nodes.size(); ++i) {
    out.nodes[i].x += t * dx[i];
    out.nodes[i].y += t * dy[i];
  }
  for (std::size_t k = 0; k < out.triangles.size(); ++k) {
    if (!(out.triangle_area(k) > 0.0)) throw MeshError("mesh displacement inverted a triangle");
  }
  return out;
}

}  // namespace bernoulli
