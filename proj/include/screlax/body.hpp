#pragma once
// The body P_nu in R^3 and its (x1, x2) projection.
//
//   P_nu = { (x1,x2,x3) : g/sqrt(nu-1) <= 1 +/- x1 <= sqrt(nu-1) g,
//                         |x3 - 6 x2 x1 + 4 x1^3| <= 2 gamma g^3 },   g = sqrt(x2 - x1^2).
//
// The projection is bounded by four parabolic arcs x2 = x1^2 + c (1 + sign*x1)^2:
// two upper arcs with c = nu-1 and two lower arcs with c = 1/(nu-1).

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "screlax/barrier_calculus.hpp"
#include "screlax/core.hpp"

namespace screlax {

/// Signed slacks of the four chain inequalities; each is >= 0 when satisfied.
struct ChainSlacks {
  double plus_lower;   // (1 + x1) - g / sqrt(nu-1)
  double plus_upper;   // sqrt(nu-1) g - (1 + x1)
  double minus_lower;  // (1 - x1) - g / sqrt(nu-1)
  double minus_upper;  // sqrt(nu-1) g - (1 - x1)

  [[nodiscard]] double min() const { return std::min({plus_lower, plus_upper, minus_lower, minus_upper}); }
};

namespace detail {
/// x2 - x1^2 with values in [-tol, 0] clamped to zero; negative beyond that.
inline double clamped_radicand(double x1, double x2) {
  const double d = x2 - x1 * x1;
  return (d < 0.0 && d >= -kMembershipTol) ? 0.0 : d;
}
}  // namespace detail

inline ChainSlacks chain_slacks(ParameterNu nu, double x1, double x2) {
  const double g = std::sqrt(std::max(0.0, detail::clamped_radicand(x1, x2)));
  const double r = nu.root();
  return {(1.0 + x1) - g / r, r * g - (1.0 + x1), (1.0 - x1) - g / r, r * g - (1.0 - x1)};
}

inline bool region_contains(ParameterNu nu, double x1, double x2) {
  if (detail::clamped_radicand(x1, x2) < 0.0) return false;
  return chain_slacks(nu, x1, x2).min() >= -kMembershipTol;
}

struct Slab {
  double x1;
  double x2;
  double center;
  double halfwidth;
  double lo;
  double hi;
};

namespace detail {
inline Slab make_slab(double gamma, double x1, double x2) {
  const double d = std::max(0.0, clamped_radicand(x1, x2));
  const double center = 6.0 * x2 * x1 - 4.0 * x1 * x1 * x1;
  const double halfwidth = 2.0 * gamma * d * std::sqrt(d);
  return {x1, x2, center, halfwidth, center - halfwidth, center + halfwidth};
}
}  // namespace detail

inline Slab x3_slab(ParameterNu nu, double x1, double x2) {
  if (!region_contains(nu, x1, x2)) {
    throw RegionError("(" + std::to_string(x1) + ", " + std::to_string(x2) + ") is outside the feasible region");
  }
  return detail::make_slab(gamma_of_nu(nu).value(), x1, x2);
}

inline bool contains(ParameterNu nu, const BodyPoint& pt) {
  if (!region_contains(nu, pt.x1, pt.x2)) return false;
  const Slab s = detail::make_slab(gamma_of_nu(nu).value(), pt.x1, pt.x2);
  return s.lo - kMembershipTol <= pt.x3 && pt.x3 <= s.hi + kMembershipTol;
}

enum class ArcOrientation { upper, lower };
enum class ArcSide { left, right };

/// x2 = x1^2 + c (1 + sign * x1)^2 on the arc's x1 interval.
struct ParabolaArc {
  ArcOrientation orientation;
  ArcSide side;
  double c;
  double sign;
  double x1_from;
  double x1_to;

  [[nodiscard]] double operator()(double x1) const {
    const double t = 1.0 + sign * x1;
    return x1 * x1 + c * t * t;
  }
};

struct FeasibleRegion {
  ParameterNu nu;
  std::array<ParabolaArc, 4> arcs;  // upper-left, upper-right, lower-left, lower-right
  std::pair<double, double> x1_extent;
  std::vector<std::pair<double, double>> corners;  // (0,nu-1), (0,1/(nu-1)), (-a,1), (a,1)
  bool degenerate;

  /// Concave side: min of the two upper arcs.
  [[nodiscard]] double upper(double x1) const {
    const double ax = std::abs(x1);
    return x1 * x1 + (nu.value() - 1.0) * (1.0 - ax) * (1.0 - ax);
  }
  /// Convex side: max of the two lower arcs.
  [[nodiscard]] double lower(double x1) const {
    const double ax = std::abs(x1);
    return x1 * x1 + (1.0 + ax) * (1.0 + ax) / (nu.value() - 1.0);
  }
  [[nodiscard]] double x2_min() const { return 1.0 / (nu.value() - 1.0); }
  [[nodiscard]] double x2_max() const { return nu.value() - 1.0; }

  /// Nonnegative x1 where the row x2 meets the boundary (upper arc for x2 >= 1, lower arc below).
  [[nodiscard]] double row_crossing(double x2) const {
    const double v = nu.value();
    if (x2 >= 1.0) {
      // v t^2 - 2(v-1) t + (v-1-x2) = 0, smaller root
      const double disc = std::max(0.0, (v - 1.0) * (v - 1.0) - v * (v - 1.0 - x2));
      return std::clamp(((v - 1.0) - std::sqrt(disc)) / v, 0.0, x1_extent.second);
    }
    // v t^2 + 2 t + 1 - (v-1) x2 = 0, larger root
    const double disc = std::max(0.0, 1.0 - v * (1.0 - (v - 1.0) * x2));
    return std::clamp((-1.0 + std::sqrt(disc)) / v, 0.0, x1_extent.second);
  }
};

inline FeasibleRegion feasible_region(ParameterNu nu) {
  const double v = nu.value();
  const double a = (v - 2.0) / v;
  const double up = v - 1.0;
  const double lo = 1.0 / (v - 1.0);
  return FeasibleRegion{
      nu,
      {ParabolaArc{ArcOrientation::upper, ArcSide::left, up, 1.0, -a, 0.0},
       ParabolaArc{ArcOrientation::upper, ArcSide::right, up, -1.0, 0.0, a},
       ParabolaArc{ArcOrientation::lower, ArcSide::left, lo, -1.0, -a, 0.0},
       ParabolaArc{ArcOrientation::lower, ArcSide::right, lo, 1.0, 0.0, a}},
      {-a, a},
      {{0.0, up}, {0.0, lo}, {-a, 1.0}, {a, 1.0}},
      v == 2.0,
  };
}

/// Origin-anchored lattice {(i*step, j*step)} restricted to index box.
struct Grid2D {
  double step;
  long i_min;
  long i_max;
  long j_min;
  long j_max;

  /// All nodes within the bounding box of the region.
  static Grid2D covering(const FeasibleRegion& region, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("grid step must be positive");
    const double a = region.x1_extent.second;
    const auto lo_index = [step](double v) { return static_cast<long>(std::ceil(v / step - 1e-9)); };
    const auto hi_index = [step](double v) { return static_cast<long>(std::floor(v / step + 1e-9)); };
    return {step, -hi_index(a), hi_index(a), lo_index(region.x2_min()), hi_index(region.x2_max())};
  }

  [[nodiscard]] double x1(long i) const { return static_cast<double>(i) * step; }
  [[nodiscard]] double x2(long j) const { return static_cast<double>(j) * step; }
  [[nodiscard]] long columns() const { return i_max - i_min + 1; }
  [[nodiscard]] long rows() const { return j_max - j_min + 1; }
};

enum class Sheet { lo, hi, boundary };

inline const char* to_string(Sheet s) {
  switch (s) {
    case Sheet::lo: return "lo";
    case Sheet::hi: return "hi";
    case Sheet::boundary: return "boundary";
  }
  return "?";
}

struct SurfacePoint {
  BodyPoint point;
  Sheet sheet;
};

/// Which region corners to add: none, the side pair (+-a, 1), or all four.
enum class CornerSet { none, side, all };

struct SampleOptions {
  bool boundary_arcs = true;  // clipped points where lattice rows and columns cross the arcs
  CornerSet corners = CornerSet::all;
};

struct SurfaceSample {
  ParameterNu nu;
  Grid2D grid;
  std::vector<SurfacePoint> points;
  bool degenerate = false;

  [[nodiscard]] std::vector<BodyPoint> positions() const {
    std::vector<BodyPoint> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.point);
    return out;
  }
  [[nodiscard]] std::size_t count(Sheet s) const {
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [s](const SurfacePoint& p) { return p.sheet == s; }));
  }
};

/// Lattice sheet points (lo, hi per feasible node, row-major in x2 then x1), then
/// boundary-clipped column points, row points and corners, each with both slab ends.
inline SurfaceSample sample_surface(ParameterNu nu, const Grid2D& grid, const SampleOptions& opts = {}) {
  if (!(grid.step > 0.0)) throw DomainError("grid step must be positive");
  SurfaceSample out{nu, grid, {}, false};
  if (nu.value() == 2.0) {
    out.degenerate = true;
    out.points.push_back({{0.0, 1.0, 0.0}, Sheet::boundary});
    return out;
  }
  const double gamma = gamma_of_nu(nu).value();
  const FeasibleRegion region = feasible_region(nu);
  std::set<std::pair<double, double>> seen;

  for (long j = grid.j_min; j <= grid.j_max; ++j) {
    const double x2 = grid.x2(j);
    for (long i = grid.i_min; i <= grid.i_max; ++i) {
      const double x1 = grid.x1(i);
      if (!region_contains(nu, x1, x2)) continue;
      const Slab s = detail::make_slab(gamma, x1, x2);
      out.points.push_back({{x1, x2, s.lo}, Sheet::lo});
      out.points.push_back({{x1, x2, s.hi}, Sheet::hi});
      seen.emplace(x1, x2);
    }
  }

  const auto emit_boundary = [&](double x1, double x2) {
    if (!seen.emplace(x1, x2).second) return;
    if (!region_contains(nu, x1, x2)) return;
    const Slab s = detail::make_slab(gamma, x1, x2);
    out.points.push_back({{x1, x2, s.lo}, Sheet::boundary});
    if (s.hi != s.lo) out.points.push_back({{x1, x2, s.hi}, Sheet::boundary});
  };

  if (opts.boundary_arcs) {
    const double a = region.x1_extent.second;
    for (long i = grid.i_min; i <= grid.i_max; ++i) {
      const double x1 = grid.x1(i);
      if (std::abs(x1) > a) continue;
      emit_boundary(x1, region.lower(x1));
      emit_boundary(x1, region.upper(x1));
    }
    for (long j = grid.j_min; j <= grid.j_max; ++j) {
      const double x2 = grid.x2(j);
      if (x2 < region.x2_min() || x2 > region.x2_max()) continue;
      const double t = region.row_crossing(x2);
      emit_boundary(-t, x2);
      emit_boundary(t, x2);
    }
  }
  if (opts.corners != CornerSet::none) {
    const std::size_t first = opts.corners == CornerSet::side ? 2 : 0;
    for (std::size_t k = first; k < region.corners.size(); ++k) emit_boundary(region.corners[k].first, region.corners[k].second);
  }
  return out;
}

inline bool nesting_check(ParameterNu nu_lo, ParameterNu nu_hi, const std::vector<BodyPoint>& pts) {
  if (nu_hi < nu_lo) throw DomainError("nesting_check needs nu_lo <= nu_hi");
  return std::all_of(pts.begin(), pts.end(),
                     [&](const BodyPoint& p) { return !contains(nu_lo, p) || contains(nu_hi, p); });
}

}  // namespace screlax
