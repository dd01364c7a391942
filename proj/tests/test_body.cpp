#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "screlax/body.hpp"

using namespace screlax;

namespace {

// Independent membership oracle for lattice nodes: between the convex and concave
// arcs and inside the x1 extent, written from the arc equations rather than the chains.
bool arc_oracle(double nu, double x1, double x2) {
  const double a = (nu - 2.0) / nu;
  if (std::abs(x1) > a + 1e-9) return false;
  const double t = std::abs(x1);
  const double up = x1 * x1 + (nu - 1.0) * (1.0 - t) * (1.0 - t);
  const double lo = x1 * x1 + (1.0 + t) * (1.0 + t) / (nu - 1.0);
  return lo - 1e-9 <= x2 && x2 <= up + 1e-9;
}

std::size_t lattice_oracle_count(double nu, double step) {
  std::size_t n = 0;
  const long imax = static_cast<long>(2.0 / step) + 2;
  const long jmax = static_cast<long>(nu / step) + 2;
  for (long j = 0; j <= jmax; ++j) {
    for (long i = -imax; i <= imax; ++i) {
      if (arc_oracle(nu, static_cast<double>(i) * step, static_cast<double>(j) * step)) ++n;
    }
  }
  return n;
}

}  // namespace

TEST(Region, Examples) {
  EXPECT_TRUE(region_contains(ParameterNu(2), 0, 1));
  EXPECT_FALSE(region_contains(ParameterNu(2), 0.01, 1));
  EXPECT_TRUE(region_contains(ParameterNu(4), 0, 3));
  EXPECT_TRUE(region_contains(ParameterNu(4), 0.5, 1));
  EXPECT_FALSE(region_contains(ParameterNu(4), 0.51, 1));
  EXPECT_FALSE(region_contains(ParameterNu(4), 0, -1));
}

TEST(Slab, Examples) {
  const Slab s4 = x3_slab(ParameterNu(4), 0, 1);
  EXPECT_EQ(s4.center, 0.0);
  EXPECT_NEAR(s4.lo, -2.309401, 1e-6);
  EXPECT_NEAR(s4.hi, 2.309401, 1e-6);
  const Slab s2 = x3_slab(ParameterNu(2), 0, 1);
  EXPECT_EQ(s2.lo, 0.0);
  EXPECT_EQ(s2.hi, 0.0);
  const Slab s3 = x3_slab(ParameterNu(3), 1.0 / 3.0, 1.0);
  EXPECT_NEAR(s3.center, 50.0 / 27.0, 1e-14);
  EXPECT_NEAR(s3.halfwidth, 32.0 / 27.0, 1e-14);
  EXPECT_NEAR(s3.lo, 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(s3.hi, 82.0 / 27.0, 1e-14);
  EXPECT_THROW(x3_slab(ParameterNu(3), 0.5, 1.0), RegionError);
}

TEST(Contains, Examples) {
  EXPECT_TRUE(contains(ParameterNu(3), {1.0 / 3.0, 1.0, 2.0 / 3.0}));
  EXPECT_FALSE(contains(ParameterNu(3), {1.0 / 3.0, 1.0, 0.66}));
  EXPECT_TRUE(contains(ParameterNu(2), {0, 1, 0}));
  EXPECT_FALSE(contains(ParameterNu(2), {0, 1, 1e-6}));
  EXPECT_FALSE(contains(ParameterNu(2), {0.2, 1.1, 0}));
}

TEST(Contains, ReflectionSymmetry) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u1(-1, 1), u2(0, 4), u3(-8, 8), un(2.0, 6.0);
  int inside = 0;
  for (int k = 0; k < 10000; ++k) {
    const ParameterNu nu(un(rng));
    const BodyPoint p{u1(rng), u2(rng), u3(rng)};
    const bool a = contains(nu, p);
    EXPECT_EQ(a, contains(nu, {-p.x1, p.x2, -p.x3}));
    inside += a;
  }
  EXPECT_GT(inside, 100);
}

TEST(Contains, SingletonAtTwo) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u1(-1, 1), u2(0, 4), u3(-1, 1);
  const ParameterNu two(2);
  for (int k = 0; k < 100000; ++k) {
    const BodyPoint p{u1(rng), u2(rng), u3(rng)};
    if (contains(two, p)) {
      EXPECT_LE(norm(p - BodyPoint{0, 1, 0}), 1e-9);
    }
  }
  EXPECT_TRUE(contains(two, {0, 1, 0}));
}

TEST(FeasibleRegionTest, Examples) {
  const auto r2 = feasible_region(ParameterNu(2));
  EXPECT_TRUE(r2.degenerate);
  for (const auto& [x1, x2] : r2.corners) {
    EXPECT_EQ(x1, 0.0);
    EXPECT_EQ(x2, 1.0);
  }
  const auto r4 = feasible_region(ParameterNu(4));
  EXPECT_FALSE(r4.degenerate);
  EXPECT_EQ(r4.x1_extent.first, -0.5);
  EXPECT_EQ(r4.x1_extent.second, 0.5);
  ASSERT_EQ(r4.corners.size(), 4u);
  EXPECT_EQ(r4.corners[0], std::make_pair(0.0, 3.0));
  EXPECT_NEAR(r4.corners[1].second, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(r4.corners[2], std::make_pair(-0.5, 1.0));
  EXPECT_EQ(r4.corners[3], std::make_pair(0.5, 1.0));
  const auto r3 = feasible_region(ParameterNu(3));
  const ParabolaArc& ur = r3.arcs[1];
  EXPECT_EQ(ur.orientation, ArcOrientation::upper);
  EXPECT_EQ(ur.side, ArcSide::right);
  EXPECT_EQ(ur.x1_from, 0.0);
  EXPECT_NEAR(ur.x1_to, 1.0 / 3.0, 1e-15);
  for (double t = 0; t <= 1.0 / 3.0; t += 1.0 / 30.0) {
    EXPECT_NEAR(ur(t), 2.0 * (t - 1) * (t - 1) + t * t, 1e-14);
  }
}

TEST(FeasibleRegionTest, ArcConsistency) {
  for (double nu : {2.5, 3.0, 4.0, 5.1, 8.0}) {
    const ParameterNu n(nu);
    const auto r = feasible_region(n);
    for (const auto& arc : r.arcs) {
      for (int k = 0; k <= 20; ++k) {
        const double t = arc.x1_from + (arc.x1_to - arc.x1_from) * k / 20.0;
        const double x2 = arc(t);
        EXPECT_TRUE(region_contains(n, t, x2)) << nu << ' ' << t;
        const ChainSlacks s = chain_slacks(n, t, x2);
        EXPECT_NEAR(s.min(), 0.0, 1e-9) << nu << ' ' << t;
        if (arc.orientation == ArcOrientation::upper && k > 0 && k < 20) {
          EXPECT_FALSE(region_contains(n, t, x2 + 1e-6));
        }
      }
    }
  }
}

TEST(FeasibleRegionTest, CornerTightness) {
  for (double nu : {2.5, 3.0, 4.0, 7.0}) {
    const ParameterNu n(nu);
    const double a = (nu - 2) / nu;
    for (double x1 : {-a, a}) {
      const ChainSlacks s = chain_slacks(n, x1, 1.0);
      const double upper_side = std::min(s.plus_upper, s.minus_upper);
      const double lower_side = std::min(s.plus_lower, s.minus_lower);
      EXPECT_NEAR(upper_side, 0.0, 1e-9);
      EXPECT_NEAR(lower_side, 0.0, 1e-9);
    }
  }
}

TEST(FeasibleRegionTest, UpperLowerMatchArcs) {
  const ParameterNu nu(4.4);
  const auto r = feasible_region(nu);
  for (double t = -r.x1_extent.second; t <= r.x1_extent.second; t += 0.01) {
    EXPECT_NEAR(r.upper(t), t <= 0 ? r.arcs[0](t) : r.arcs[1](t), 1e-13);
    EXPECT_NEAR(r.lower(t), t <= 0 ? r.arcs[2](t) : r.arcs[3](t), 1e-13);
    EXPECT_LE(r.lower(t), r.upper(t) + 1e-12);
  }
  for (double x2 = r.x2_min(); x2 <= r.x2_max(); x2 += 0.05) {
    const double c = r.row_crossing(x2);
    EXPECT_TRUE(region_contains(nu, c, x2)) << x2;
    EXPECT_TRUE(region_contains(nu, -c, x2)) << x2;
    if (c + 1e-4 < r.x1_extent.second && std::abs(x2 - 1.0) > 1e-3) {
      EXPECT_FALSE(region_contains(nu, c + 1e-4, x2)) << x2;
    }
  }
}

TEST(Sample, DegenerateAtTwo) {
  const ParameterNu nu(2);
  for (double step : {0.012, 0.3}) {
    const auto s = sample_surface(nu, Grid2D::covering(feasible_region(nu), step));
    EXPECT_TRUE(s.degenerate);
    ASSERT_EQ(s.points.size(), 1u);
    EXPECT_EQ(s.points[0].point, (BodyPoint{0, 1, 0}));
  }
}

TEST(Sample, Nu4CoarseGrid) {
  const ParameterNu nu(4);
  const auto s = sample_surface(nu, Grid2D::covering(feasible_region(nu), 0.25));
  const double g = 2.0 * 2.0 / std::sqrt(3.0);
  bool lo = false, hi = false;
  std::set<double> corner_x3;
  for (const auto& p : s.points) {
    if (p.point.x1 == 0 && p.point.x2 == 1) {
      if (std::abs(p.point.x3 + g) < 1e-6) lo = true;
      if (std::abs(p.point.x3 - g) < 1e-6) hi = true;
    }
    if (std::abs(p.point.x1) == 0.5 && p.point.x2 == 1.0) {
      const Slab sl = x3_slab(nu, p.point.x1, 1.0);
      EXPECT_TRUE(p.point.x3 == sl.lo || p.point.x3 == sl.hi);
      corner_x3.insert(p.point.x3);
    }
  }
  EXPECT_TRUE(lo);
  EXPECT_TRUE(hi);
  EXPECT_EQ(corner_x3.size(), 4u);
  // frozen from the oracle: 23 feasible lattice nodes, 38 clipped boundary points
  EXPECT_EQ(lattice_oracle_count(4.0, 0.25), 23u);
  EXPECT_EQ(s.count(Sheet::lo), 23u);
  EXPECT_EQ(s.count(Sheet::hi), 23u);
  EXPECT_EQ(s.count(Sheet::boundary), 38u);
}

TEST(Sample, CountMatchesRejectionOracle) {
  for (auto [nu, step] : {std::pair{5.1, 0.012}, std::pair{3.0, 0.012}, std::pair{2.3, 0.05}}) {
    const ParameterNu n(nu);
    const auto s = sample_surface(n, Grid2D::covering(feasible_region(n), step));
    const std::size_t oracle = lattice_oracle_count(nu, step);
    EXPECT_EQ(s.count(Sheet::lo), oracle) << nu;
    EXPECT_EQ(s.count(Sheet::hi), oracle) << nu;
  }
  EXPECT_EQ(lattice_oracle_count(5.1, 0.012), 14263u);
}

TEST(Sample, AllPointsValidAndBoundaryOnArcs) {
  for (double nu : {2.1, 3.0, 4.0, 5.1}) {
    const ParameterNu n(nu);
    const auto grid = Grid2D::covering(feasible_region(n), 0.03);
    const auto s = sample_surface(n, grid);
    for (const auto& p : s.points) {
      ASSERT_TRUE(contains(n, p.point)) << nu << ' ' << p.point.x1 << ' ' << p.point.x2;
      if (p.sheet == Sheet::boundary) {
        EXPECT_NEAR(chain_slacks(n, p.point.x1, p.point.x2).min(), 0.0, 1e-9);
        const double sl = p.point.x3;
        const Slab slab = x3_slab(n, p.point.x1, p.point.x2);
        EXPECT_TRUE(sl == slab.lo || sl == slab.hi);
      }
    }
  }
}

TEST(Sample, CornersOnlyOption) {
  const ParameterNu nu(3.3);
  const auto grid = Grid2D::covering(feasible_region(nu), 0.05);
  const auto region = feasible_region(nu);
  const auto boundary_sites = [&](CornerSet which) {
    std::set<std::pair<double, double>> sites;
    for (const auto& p : sample_surface(nu, grid, {.boundary_arcs = false, .corners = which}).points) {
      if (p.sheet == Sheet::boundary) sites.emplace(p.point.x1, p.point.x2);
    }
    return sites;
  };
  const std::set<std::pair<double, double>> all(region.corners.begin(), region.corners.end());
  EXPECT_EQ(boundary_sites(CornerSet::all), all);
  EXPECT_EQ(boundary_sites(CornerSet::side), (std::set<std::pair<double, double>>{region.corners[2], region.corners[3]}));
  EXPECT_TRUE(boundary_sites(CornerSet::none).empty());
}

TEST(Grid, Covering) {
  const auto r = feasible_region(ParameterNu(4));
  const auto g = Grid2D::covering(r, 0.25);
  EXPECT_EQ(g.i_min, -2);
  EXPECT_EQ(g.i_max, 2);
  EXPECT_EQ(g.j_min, 2);
  EXPECT_EQ(g.j_max, 12);
  EXPECT_EQ(g.x1(0), 0.0);
  EXPECT_THROW(Grid2D::covering(r, 0.0), DomainError);
  EXPECT_THROW(Grid2D::covering(r, -1.0), DomainError);
}

TEST(Nesting, Examples) {
  const std::vector<BodyPoint> one{{0, 1, 0}};
  EXPECT_TRUE(nesting_check(ParameterNu(2), ParameterNu(3), one));
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u1(-0.5, 0.5), u2(1.0 / 3.0, 3.0), u3(-12, 12);
  std::vector<BodyPoint> pts;
  for (int k = 0; k < 10000; ++k) pts.push_back({u1(rng), u2(rng), u3(rng)});
  EXPECT_TRUE(nesting_check(ParameterNu(3), ParameterNu(4), pts));
  EXPECT_TRUE(nesting_check(ParameterNu(3.5), ParameterNu(3.5), pts));
  EXPECT_THROW(nesting_check(ParameterNu(4), ParameterNu(3), pts), DomainError);
}

TEST(Nesting, RandomPairs) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> un(2.0, 8.0), u1(-1, 1), u2(0, 7), u3(-60, 60);
  std::vector<BodyPoint> pts;
  for (int k = 0; k < 2000; ++k) pts.push_back({u1(rng), u2(rng), u3(rng)});
  for (int k = 0; k < 50; ++k) {
    double a = un(rng), b = un(rng);
    if (a > b) std::swap(a, b);
    EXPECT_TRUE(nesting_check(ParameterNu(a), ParameterNu(b), pts)) << a << ' ' << b;
  }
}

TEST(SlabWidth, Monotone) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> un(2.0, 8.0), u1(-1, 1), u2(0, 7);
  int tested = 0;
  while (tested < 2000) {
    double a = un(rng), b = un(rng);
    if (a > b) std::swap(a, b);
    const double x1 = u1(rng), x2 = u2(rng);
    if (!region_contains(ParameterNu(a), x1, x2)) continue;
    ++tested;
    EXPECT_TRUE(region_contains(ParameterNu(b), x1, x2));
    EXPECT_GE(x3_slab(ParameterNu(b), x1, x2).halfwidth, x3_slab(ParameterNu(a), x1, x2).halfwidth);
  }
}
