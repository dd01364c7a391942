#pragma once
// Deterministic incremental quickhull in R^3 and vertical-line queries on the result.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "screlax/core.hpp"

namespace screlax {

/// Triangle with outward unit normal; the halfspace is dot(normal, x) <= offset.
struct HullFacet {
  std::array<std::size_t, 3> v;
  BodyPoint normal;
  double offset;
};

struct HullMesh {
  std::vector<BodyPoint> vertices;
  std::vector<HullFacet> facets;
  bool degenerate = false;
  /// Dimension of the affine hull of the input (3 unless degenerate).
  int affine_dim = 3;
  BodyPoint affine_origin{};
  std::vector<BodyPoint> affine_basis;  // orthonormal, affine_dim vectors when degenerate
  /// Scale-aware tolerance: kHullRelTol times the input bounding-box diameter.
  double tolerance = 0.0;

  [[nodiscard]] std::size_t edge_count() const { return facets.size() * 3 / 2; }

  [[nodiscard]] double max_violation(const BodyPoint& p) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& f : facets) worst = std::max(worst, dot(f.normal, p) - f.offset);
    return worst;
  }
};

namespace detail {

inline double bbox_diameter(std::span<const BodyPoint> pts) {
  BodyPoint lo = pts.front(), hi = pts.front();
  for (const auto& p : pts) {
    lo = {std::min(lo.x1, p.x1), std::min(lo.x2, p.x2), std::min(lo.x3, p.x3)};
    hi = {std::max(hi.x1, p.x1), std::max(hi.x2, p.x2), std::max(hi.x3, p.x3)};
  }
  return norm(hi - lo);
}

/// Andrew's monotone chain on 2D coordinates; returns indices in CCW order, collinear points dropped.
inline std::vector<std::size_t> monotone_chain(const std::vector<std::array<double, 2>>& xy, double eps) {
  std::vector<std::size_t> order(xy.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xy[a] < xy[b]; });
  if (order.size() < 3) return order;
  const auto turn = [&](std::size_t o, std::size_t a, std::size_t b) {
    return (xy[a][0] - xy[o][0]) * (xy[b][1] - xy[o][1]) - (xy[a][1] - xy[o][1]) * (xy[b][0] - xy[o][0]);
  };
  std::vector<std::size_t> h(2 * order.size());
  std::size_t k = 0;
  for (std::size_t i : order) {
    while (k >= 2 && turn(h[k - 2], h[k - 1], i) <= eps) --k;
    h[k++] = i;
  }
  const std::size_t lower = k + 1;
  for (std::size_t r = order.size() - 1; r-- > 0;) {
    const std::size_t i = order[r];
    while (k >= lower && turn(h[k - 2], h[k - 1], i) <= eps) --k;
    h[k++] = i;
  }
  h.resize(k - 1);
  return h;
}

class QuickHullBuilder {
 public:
  explicit QuickHullBuilder(std::span<const BodyPoint> input) : pts_(input.begin(), input.end()) {
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
    diameter_ = bbox_diameter(pts_);
    eps_ = 1e-11 * std::max(diameter_, 1e-300);
  }

  HullMesh build() {
    HullMesh mesh;
    mesh.tolerance = kHullRelTol * diameter_;
    if (!initial_simplex(mesh)) return mesh;

    // faces_ only grows; a face never gains outside points after it is created.
    for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
      if (faces_[fi].alive && !faces_[fi].outside.empty()) add_point(static_cast<int>(fi));
    }

    std::vector<int> remap(pts_.size(), -1);
    std::vector<int> used;
    for (const auto& f : faces_) {
      if (!f.alive) continue;
      for (int v : f.v) used.push_back(v);
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    for (std::size_t i = 0; i < used.size(); ++i) {
      remap[used[i]] = static_cast<int>(i);
      mesh.vertices.push_back(pts_[used[i]]);
    }
    for (const auto& f : faces_) {
      if (!f.alive) continue;
      HullFacet out{{static_cast<std::size_t>(remap[f.v[0]]), static_cast<std::size_t>(remap[f.v[1]]),
                     static_cast<std::size_t>(remap[f.v[2]])},
                    f.n,
                    f.d};
      mesh.facets.push_back(out);
    }
    return mesh;
  }

 private:
  struct Face {
    std::array<int, 3> v;
    std::array<int, 3> adj{-1, -1, -1};  // adj[k] lies across edge (v[k], v[k+1])
    BodyPoint n;
    double d = 0.0;
    std::vector<int> outside;
    bool alive = true;
    std::uint32_t mark = 0;
  };

  [[nodiscard]] double distance(const Face& f, int p) const { return dot(f.n, pts_[p]) - f.d; }

  int make_face(int a, int b, int c) {
    Face f;
    f.v = {a, b, c};
    BodyPoint n = cross(pts_[b] - pts_[a], pts_[c] - pts_[a]);
    const double len = norm(n);
    if (len > 0.0) n = (1.0 / len) * n;
    f.n = n;
    const BodyPoint centroid = (1.0 / 3.0) * (pts_[a] + pts_[b] + pts_[c]);
    f.d = dot(n, centroid);
    faces_.push_back(std::move(f));
    return static_cast<int>(faces_.size() - 1);
  }

  bool initial_simplex(HullMesh& mesh) {
    const int n = static_cast<int>(pts_.size());
    std::array<int, 6> ext{0, 0, 0, 0, 0, 0};
    const auto coord = [&](int i, int axis) {
      return axis == 0 ? pts_[i].x1 : axis == 1 ? pts_[i].x2 : pts_[i].x3;
    };
    for (int i = 0; i < n; ++i) {
      for (int axis = 0; axis < 3; ++axis) {
        if (coord(i, axis) < coord(ext[2 * axis], axis)) ext[2 * axis] = i;
        if (coord(i, axis) > coord(ext[2 * axis + 1], axis)) ext[2 * axis + 1] = i;
      }
    }
    int a = ext[0], b = ext[0];
    double best = -1.0;
    for (int i = 0; i < 6; ++i) {
      for (int j = i + 1; j < 6; ++j) {
        const BodyPoint d = pts_[ext[i]] - pts_[ext[j]];
        if (dot(d, d) > best) {
          best = dot(d, d);
          a = std::min(ext[i], ext[j]);
          b = std::max(ext[i], ext[j]);
        }
      }
    }
    if (std::sqrt(best) <= eps_) {
      set_degenerate(mesh, 0, {a}, {});
      return false;
    }

    const BodyPoint dir = (1.0 / norm(pts_[b] - pts_[a])) * (pts_[b] - pts_[a]);
    int c = -1;
    best = -1.0;
    for (int i = 0; i < n; ++i) {
      const double dist = norm(cross(pts_[i] - pts_[a], dir));
      if (dist > best) {
        best = dist;
        c = i;
      }
    }
    if (best <= eps_) {
      int lo = a, hi = a;
      for (int i = 0; i < n; ++i) {
        if (dot(pts_[i] - pts_[a], dir) < dot(pts_[lo] - pts_[a], dir)) lo = i;
        if (dot(pts_[i] - pts_[a], dir) > dot(pts_[hi] - pts_[a], dir)) hi = i;
      }
      set_degenerate(mesh, 1, {std::min(lo, hi), std::max(lo, hi)}, {dir});
      return false;
    }

    BodyPoint pn = cross(pts_[b] - pts_[a], pts_[c] - pts_[a]);
    pn = (1.0 / norm(pn)) * pn;
    int d = -1;
    best = -1.0;
    for (int i = 0; i < n; ++i) {
      const double dist = std::abs(dot(pts_[i] - pts_[a], pn));
      if (dist > best) {
        best = dist;
        d = i;
      }
    }
    if (best <= eps_) {
      const BodyPoint u = dir;
      const BodyPoint v = cross(pn, u);
      std::vector<std::array<double, 2>> xy(n);
      for (int i = 0; i < n; ++i) xy[i] = {dot(pts_[i] - pts_[a], u), dot(pts_[i] - pts_[a], v)};
      const auto ring = monotone_chain(xy, eps_ * diameter_);
      std::vector<int> verts(ring.begin(), ring.end());
      set_degenerate(mesh, 2, verts, {u, v});
      return false;
    }

    if (dot(pts_[d] - pts_[a], pn) > 0.0) std::swap(b, c);
    const std::array<std::array<int, 3>, 4> tri{{{a, b, c}, {a, d, b}, {b, d, c}, {c, d, a}}};
    for (const auto& t : tri) make_face(t[0], t[1], t[2]);
    for (int f = 0; f < 4; ++f) {
      for (int k = 0; k < 3; ++k) {
        const int u = faces_[f].v[k], w = faces_[f].v[(k + 1) % 3];
        for (int g = 0; g < 4; ++g) {
          if (g == f) continue;
          for (int m = 0; m < 3; ++m) {
            if (faces_[g].v[m] == w && faces_[g].v[(m + 1) % 3] == u) faces_[f].adj[k] = g;
          }
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      if (i == a || i == b || i == c || i == d) continue;
      for (int f = 0; f < 4; ++f) {
        if (distance(faces_[f], i) > eps_) {
          faces_[f].outside.push_back(i);
          break;
        }
      }
    }
    start_of_.assign(pts_.size(), -1);
    end_of_.assign(pts_.size(), -1);
    return true;
  }

  void set_degenerate(HullMesh& mesh, int dim, const std::vector<int>& verts, std::vector<BodyPoint> basis) {
    mesh.degenerate = true;
    mesh.affine_dim = dim;
    mesh.affine_origin = pts_[verts.front()];
    mesh.affine_basis = std::move(basis);
    for (int v : verts) mesh.vertices.push_back(pts_[v]);
  }

  void add_point(int fi) {
    const auto& seed = faces_[fi];
    int eye = seed.outside.front();
    double far = distance(seed, eye);
    for (int p : seed.outside) {
      const double dist = distance(seed, p);
      if (dist > far) {
        far = dist;
        eye = p;
      }
    }

    ++mark_;
    std::vector<int> visible{fi};
    faces_[fi].mark = mark_;
    std::vector<std::pair<int, int>> horizon;  // (visible face, edge index)
    for (std::size_t q = 0; q < visible.size(); ++q) {
      const int f = visible[q];
      for (int k = 0; k < 3; ++k) {
        const int g = faces_[f].adj[k];
        if (faces_[g].mark == mark_) continue;
        if (distance(faces_[g], eye) > eps_) {
          faces_[g].mark = mark_;
          visible.push_back(g);
        } else {
          horizon.emplace_back(f, k);
        }
      }
    }

    std::vector<int> created;
    created.reserve(horizon.size());
    for (const auto& [f, k] : horizon) {
      const int a = faces_[f].v[k];
      const int b = faces_[f].v[(k + 1) % 3];
      const int across = faces_[f].adj[k];
      const int nf = make_face(a, b, eye);
      faces_[nf].adj[0] = across;
      for (int m = 0; m < 3; ++m) {
        if (faces_[across].v[m] == b && faces_[across].v[(m + 1) % 3] == a) faces_[across].adj[m] = nf;
      }
      if (start_of_[a] != -1 || end_of_[b] != -1) {
        throw Error("quickhull: horizon is not a simple cycle (numerically inconsistent visibility)");
      }
      start_of_[a] = nf;
      end_of_[b] = nf;
      created.push_back(nf);
    }
    for (int nf : created) {
      const int a = faces_[nf].v[0];
      const int b = faces_[nf].v[1];
      faces_[nf].adj[1] = start_of_[b];
      faces_[nf].adj[2] = end_of_[a];
    }
    for (int nf : created) {
      start_of_[faces_[nf].v[0]] = -1;
      end_of_[faces_[nf].v[1]] = -1;
    }

    for (int f : visible) {
      faces_[f].alive = false;
      for (int p : faces_[f].outside) {
        if (p == eye) continue;
        for (int nf : created) {
          if (distance(faces_[nf], p) > eps_) {
            faces_[nf].outside.push_back(p);
            break;
          }
        }
      }
      std::vector<int>().swap(faces_[f].outside);
    }
  }

  std::vector<BodyPoint> pts_;
  std::vector<Face> faces_;
  std::vector<int> start_of_;
  std::vector<int> end_of_;
  double diameter_ = 0.0;
  double eps_ = 0.0;
  std::uint32_t mark_ = 0;
};

}  // namespace detail

/// Convex hull of a point cloud. Rank-deficient input yields a degenerate mesh
/// whose vertices span the affine hull (point, segment ends, or CCW polygon).
inline HullMesh convex_hull_3d(std::span<const BodyPoint> points) {
  if (points.empty()) throw UsageError("convex_hull_3d needs at least one point");
  HullMesh mesh = detail::QuickHullBuilder(points).build();
  // A point inserted early can end up coplanar with a later facet; rebuilding from
  // the vertices drops it.  The vertex count only decreases, so this terminates.
  while (!mesh.degenerate) {
    HullMesh again = detail::QuickHullBuilder(mesh.vertices).build();
    if (again.vertices.size() == mesh.vertices.size()) break;
    mesh = std::move(again);
  }
  return mesh;
}

struct HullSlab {
  double x1 = 0.0;
  double x2 = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool empty = true;
};

namespace detail {
inline HullSlab finish_slab(double x1, double x2, double lo, double hi, double tol) {
  HullSlab s{x1, x2, lo, hi, false};
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi + tol) {
    s.empty = true;
    return s;
  }
  if (lo > hi) s.lo = s.hi = 0.5 * (lo + hi);
  return s;
}

inline void clip_with_facet(const HullFacet& f, double x1, double x2, double& lo, double& hi, bool& outside,
                            double tol) {
  const double n3 = f.normal.x3;
  const double rest = f.offset - f.normal.x1 * x1 - f.normal.x2 * x2;
  if (n3 > kNormalTol) {
    hi = std::min(hi, rest / n3);
  } else if (n3 < -kNormalTol) {
    lo = std::max(lo, rest / n3);
  } else if (rest < -tol) {
    outside = true;
  }
}
}  // namespace detail

/// x3-extent of the hull over (x1, x2), from every facet halfspace.
inline HullSlab hull_slab(const HullMesh& mesh, double x1, double x2) {
  if (mesh.degenerate) throw DegenerateMeshError("hull_slab needs a full-dimensional hull");
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool outside = false;
  for (const auto& f : mesh.facets) detail::clip_with_facet(f, x1, x2, lo, hi, outside, mesh.tolerance);
  if (outside) return {x1, x2, lo, hi, true};
  return detail::finish_slab(x1, x2, lo, hi, mesh.tolerance);
}

/// Bucketed lookup of the upper and lower hull surfaces over the (x1, x2) shadow.
///
/// For a convex polytope every upper facet plane bounds x3 from above and the
/// facet whose projection contains (x1, x2) attains the minimum, so taking the
/// extremum over the facets registered in the query's bucket reproduces hull_slab.
class SlabIndex {
 public:
  explicit SlabIndex(const HullMesh& mesh) : tol_(mesh.tolerance) {
    if (mesh.degenerate) throw DegenerateMeshError("SlabIndex needs a full-dimensional hull");
    std::vector<std::array<double, 2>> xy;
    xy.reserve(mesh.vertices.size());
    for (const auto& v : mesh.vertices) xy.push_back({v.x1, v.x2});
    for (std::size_t i : detail::monotone_chain(xy, 0.0)) shadow_.push_back(xy[i]);

    x_lo_ = y_lo_ = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo_, y_hi = -y_lo_;
    for (const auto& p : xy) {
      x_lo_ = std::min(x_lo_, p[0]);
      y_lo_ = std::min(y_lo_, p[1]);
      x_hi = std::max(x_hi, p[0]);
      y_hi = std::max(y_hi, p[1]);
    }
    const auto cells = static_cast<std::size_t>(std::max(1.0, std::sqrt(mesh.facets.size() / 4.0)));
    nx_ = ny_ = cells;
    wx_ = std::max((x_hi - x_lo_) / static_cast<double>(nx_), 1e-300);
    wy_ = std::max((y_hi - y_lo_) / static_cast<double>(ny_), 1e-300);
    upper_cells_.assign(nx_ * ny_, {});
    lower_cells_.assign(nx_ * ny_, {});

    for (const auto& f : mesh.facets) {
      const double n3 = f.normal.x3;
      if (std::abs(n3) <= kNormalTol) continue;
      auto& cells_of = n3 > 0.0 ? upper_cells_ : lower_cells_;
      auto& planes = n3 > 0.0 ? upper_ : lower_;
      double fx0 = std::numeric_limits<double>::infinity(), fy0 = fx0, fx1 = -fx0, fy1 = -fx0;
      for (std::size_t v : f.v) {
        fx0 = std::min(fx0, mesh.vertices[v].x1);
        fx1 = std::max(fx1, mesh.vertices[v].x1);
        fy0 = std::min(fy0, mesh.vertices[v].x2);
        fy1 = std::max(fy1, mesh.vertices[v].x2);
      }
      const auto id = static_cast<std::uint32_t>(planes.size());
      planes.push_back(f);
      const std::size_t i0 = cell_x(fx0 - tol_), i1 = cell_x(fx1 + tol_);
      const std::size_t j0 = cell_y(fy0 - tol_), j1 = cell_y(fy1 + tol_);
      for (std::size_t j = j0; j <= j1; ++j) {
        for (std::size_t i = i0; i <= i1; ++i) cells_of[j * nx_ + i].push_back(id);
      }
    }
  }

  /// Point-in-shadow test at the hull tolerance.
  [[nodiscard]] bool shadow_contains(double x1, double x2) const {
    const std::size_t m = shadow_.size();
    if (m < 3) return false;
    for (std::size_t k = 0; k < m; ++k) {
      const auto& a = shadow_[k];
      const auto& b = shadow_[(k + 1) % m];
      const double ex = b[0] - a[0], ey = b[1] - a[1];
      const double len = std::hypot(ex, ey);
      if (len == 0.0) continue;
      if ((ex * (x2 - a[1]) - ey * (x1 - a[0])) / len < -tol_) return false;
    }
    return true;
  }

  [[nodiscard]] HullSlab slab(double x1, double x2) const {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    if (!shadow_contains(x1, x2)) return {x1, x2, lo, hi, true};
    const std::size_t cell = cell_y(x2) * nx_ + cell_x(x1);
    bool outside = false;
    for (std::uint32_t id : upper_cells_[cell]) detail::clip_with_facet(upper_[id], x1, x2, lo, hi, outside, tol_);
    for (std::uint32_t id : lower_cells_[cell]) detail::clip_with_facet(lower_[id], x1, x2, lo, hi, outside, tol_);
    return detail::finish_slab(x1, x2, lo, hi, tol_);
  }

  /// Shadow polygon vertices in CCW order.
  [[nodiscard]] const std::vector<std::array<double, 2>>& shadow() const { return shadow_; }

 private:
  [[nodiscard]] std::size_t cell_x(double x) const {
    const double t = std::floor((x - x_lo_) / wx_);
    return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(nx_ - 1)));
  }
  [[nodiscard]] std::size_t cell_y(double y) const {
    const double t = std::floor((y - y_lo_) / wy_);
    return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(ny_ - 1)));
  }

  double tol_;
  std::vector<std::array<double, 2>> shadow_;
  std::vector<HullFacet> upper_;
  std::vector<HullFacet> lower_;
  std::vector<std::vector<std::uint32_t>> upper_cells_;
  std::vector<std::vector<std::uint32_t>> lower_cells_;
  double x_lo_ = 0.0, y_lo_ = 0.0, wx_ = 1.0, wy_ = 1.0;
  std::size_t nx_ = 1, ny_ = 1;
};

}  // namespace screlax
