#pragma once
// Degradation nu -> nu_tilde(nu) of the barrier parameter under convexification:
// the least nu_tilde whose body contains the convex hull of P_nu.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "screlax/barrier_calculus.hpp"
#include "screlax/body.hpp"
#include "screlax/core.hpp"
#include "screlax/hull.hpp"

namespace screlax {

/// nu^2/8 + nu/2 + 1/2, written as (nu+2)^2/8.
inline double analytic_lower_bound(ParameterNu nu) {
  const double t = nu.value() + 2.0;
  return t * t / 8.0;
}

/// Discriminant of the chord x2 = -nu x1 + nu - 1 meeting the arc
/// x2 = (nu'-1)(x1-1)^2 + x1^2 at nu' = analytic_lower_bound(nu); zero means tangency.
inline double tangency_certificate(ParameterNu nu) {
  const double v = nu.value();
  const double w = analytic_lower_bound(nu);
  const double b = v - 2.0 * w + 2.0;
  return b * b - 4.0 * w * (w - v);
}

/// True when P_candidate's slab over (x1, x2) covers [slab.lo, slab.hi].
inline bool slab_contained(const HullSlab& slab, ParameterNu candidate) {
  if (!region_contains(candidate, slab.x1, slab.x2)) return false;
  const Slab s = detail::make_slab(gamma_of_nu(candidate).value(), slab.x1, slab.x2);
  return s.lo - kMembershipTol <= slab.lo && slab.hi <= s.hi + kMembershipTol;
}

/// Least nu_tilde in [nu_floor, nu_cap] with slab_contained, by bisection to tol.
/// The predicate is monotone in nu_tilde, since the region grows and the slab widens.
inline double nu_tilde_at(const HullSlab& slab, ParameterNu nu_floor, double nu_cap, double tol) {
  if (slab.empty) throw DomainError("nu_tilde_at needs a non-empty slab");
  if (!(nu_cap > nu_floor.value())) throw DomainError("nu_cap must exceed nu_floor");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (slab_contained(slab, nu_floor)) return nu_floor.value();
  if (!slab_contained(slab, ParameterNu(nu_cap))) {
    throw CapExceeded("slab over (" + std::to_string(slab.x1) + ", " + std::to_string(slab.x2) +
                      ") not contained in P_nu for nu <= " + std::to_string(nu_cap));
  }
  double lo = nu_floor.value();
  double hi = nu_cap;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (slab_contained(slab, ParameterNu(mid)) ? hi : lo) = mid;
  }
  return hi;
}

struct NuTildeOptions {
  double tol = 1e-6;
  double cap = 64.0;
  /// Lattice nodes plus the side corners; see README for why arcs and tips are not added here.
  SampleOptions sampling{.boundary_arcs = false, .corners = CornerSet::side};
};

struct NuTildeResult {
  double nu_tilde;
  double argmax_x1;
  double argmax_x2;
  std::size_t nodes_evaluated = 0;
};

/// Sampled body and its hull, as used by nu_tilde.
struct RelaxedBody {
  SurfaceSample sample;
  HullMesh hull;
};

inline RelaxedBody relaxed_body(ParameterNu nu, double step, const SampleOptions& sampling) {
  const Grid2D grid = Grid2D::covering(feasible_region(nu), step);
  SurfaceSample sample = sample_surface(nu, grid, sampling);
  const auto pts = sample.positions();
  HullMesh hull = convex_hull_3d(pts);
  return {std::move(sample), std::move(hull)};
}

/// Maximum over lattice nodes in the hull shadow of the pointwise nu_tilde.
inline NuTildeResult nu_tilde(ParameterNu nu, double step, const NuTildeOptions& opts = {}) {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  if (nu.value() == 2.0) return {2.0, 0.0, 1.0, 1};

  const RelaxedBody body = relaxed_body(nu, step, opts.sampling);
  if (body.hull.degenerate) {
    throw DegenerateMeshError("sampled body for nu=" + std::to_string(nu.value()) + " at step " +
                              std::to_string(step) + " spans only " + std::to_string(body.hull.affine_dim) +
                              " dimensions");
  }
  const SlabIndex index(body.hull);
  const Grid2D& grid = body.sample.grid;

  NuTildeResult best{nu.value(), 0.0, 1.0, 0};
  bool have_arg = false;
  for (long j = grid.j_min; j <= grid.j_max; ++j) {
    for (long i = grid.i_min; i <= grid.i_max; ++i) {
      const double x1 = grid.x1(i);
      const double x2 = grid.x2(j);
      const HullSlab hs = index.slab(x1, x2);
      if (hs.empty) continue;
      ++best.nodes_evaluated;
      if (have_arg && slab_contained(hs, ParameterNu(best.nu_tilde))) continue;
      const double v = nu_tilde_at(hs, ParameterNu(best.nu_tilde), opts.cap, opts.tol);
      if (!have_arg || v > best.nu_tilde) {
        best.nu_tilde = v;
        best.argmax_x1 = x1;
        best.argmax_x2 = x2;
        have_arg = true;
      }
    }
  }
  return best;
}

struct NuTildeCurve {
  std::vector<double> nu_values;
  std::vector<double> nu_tilde_values;
  double grid_step = 0.0;
  double tol = 0.0;
  std::vector<std::pair<double, double>> argmax_points;
  /// Per-nu failure messages; empty string means the value is valid.
  std::vector<std::string> errors;

  [[nodiscard]] bool complete() const {
    return std::all_of(errors.begin(), errors.end(), [](const std::string& e) { return e.empty(); });
  }
};

/// count uniformly spaced values from nu_min to nu_max inclusive.
inline std::vector<double> uniform_nu_values(double nu_min, double nu_max, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = nu_min + (nu_max - nu_min) * static_cast<double>(i) / (count - 1);
  }
  out.back() = nu_max;
  return out;
}

namespace detail {
inline void check_range(double nu_min, double nu_max, int count) {
  if (!(nu_min >= 2.0) || !(nu_max > nu_min)) throw DomainError("sweep needs 2 <= nu_min < nu_max");
  if (count < 2) throw DomainError("sweep needs count >= 2");
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers; fn writes only slot i.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}
}  // namespace detail

/// Like sweep, but records per-nu failures in curve.errors instead of throwing.
inline NuTildeCurve sweep_partial(double nu_min, double nu_max, int count, double step,
                                  const NuTildeOptions& opts = {}, unsigned threads = 0) {
  detail::check_range(nu_min, nu_max, count);
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  NuTildeCurve curve;
  curve.nu_values = uniform_nu_values(nu_min, nu_max, count);
  curve.grid_step = step;
  curve.tol = opts.tol;
  const std::size_t n = curve.nu_values.size();
  curve.nu_tilde_values.assign(n, std::nan(""));
  curve.argmax_points.assign(n, {std::nan(""), std::nan("")});
  curve.errors.assign(n, {});
  detail::parallel_for(n, threads, [&](std::size_t i) {
    try {
      const NuTildeResult r = nu_tilde(ParameterNu(curve.nu_values[i]), step, opts);
      curve.nu_tilde_values[i] = r.nu_tilde;
      curve.argmax_points[i] = {r.argmax_x1, r.argmax_x2};
    } catch (const std::exception& e) {
      curve.errors[i] = e.what();
      if (curve.errors[i].empty()) curve.errors[i] = "error";
    }
  });
  return curve;
}

inline NuTildeCurve sweep(double nu_min, double nu_max, int count, double step, const NuTildeOptions& opts = {},
                          unsigned threads = 0) {
  NuTildeCurve curve = sweep_partial(nu_min, nu_max, count, step, opts, threads);
  for (std::size_t i = 0; i < curve.errors.size(); ++i) {
    if (!curve.errors[i].empty()) {
      throw Error("sweep failed at nu=" + std::to_string(curve.nu_values[i]) + ": " + curve.errors[i]);
    }
  }
  return curve;
}

struct ConvergenceReport {
  double base_step = 0.0;
  std::array<NuTildeCurve, 3> curves;  // steps s, 2s, 4s
  double delta_4s = 0.0;
  double delta_2s = 0.0;
};

inline double max_abs_difference(const NuTildeCurve& a, const NuTildeCurve& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.nu_tilde_values.size(); ++i) {
    d = std::max(d, std::abs(a.nu_tilde_values[i] - b.nu_tilde_values[i]));
  }
  return d;
}

inline ConvergenceReport assemble_convergence(double base_step, std::array<NuTildeCurve, 3> curves) {
  ConvergenceReport r;
  r.base_step = base_step;
  r.curves = std::move(curves);
  r.delta_2s = max_abs_difference(r.curves[1], r.curves[0]);
  r.delta_4s = max_abs_difference(r.curves[2], r.curves[0]);
  return r;
}

inline ConvergenceReport convergence_study(double nu_min, double nu_max, int count, double base_step,
                                           const NuTildeOptions& opts = {}, unsigned threads = 0) {
  return assemble_convergence(base_step, {sweep(nu_min, nu_max, count, base_step, opts, threads),
                                          sweep(nu_min, nu_max, count, 2.0 * base_step, opts, threads),
                                          sweep(nu_min, nu_max, count, 4.0 * base_step, opts, threads)});
}

}  // namespace screlax
