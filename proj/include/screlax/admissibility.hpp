#pragma once
// Admissibility checking of candidate functions on (-1, 1).
//
// Tests the necessary conditions at each grid point (normalized triple in P_nu)
// and the pairwise envelope bounds p_-(x) <= f'(x) <= p_+(x) for grid pairs
// within a Hilbert-metric radius.  A clean report is evidence, not a certificate.

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "screlax/barrier_calculus.hpp"
#include "screlax/body.hpp"
#include "screlax/core.hpp"

namespace screlax {

/// Analytic derivative source for a candidate f on (-1, 1).
struct BarrierOracle {
  std::string name;
  std::function<DerivativeTriple(double)> evaluate;

  DerivativeTriple operator()(double x) const { return evaluate(x); }
};

/// f(x) = -1/2 log(1 - x^2); its normalized triple is (0, 1, 0) everywhere.
inline BarrierOracle symmetric_log_barrier() {
  return {"symmetric-log", [](double x) {
            const double q = 1.0 - x * x;
            return DerivativeTriple{x, x / q, (1.0 + x * x) / (q * q), (6.0 * x + 2.0 * x * x * x) / (q * q * q)};
          }};
}

/// f(x) = -((nu-1)/nu) log(1-x) - (1/nu) log(1+x); lies on the boundary of P_nu.
inline BarrierOracle weighted_log_barrier(ParameterNu nu) {
  const double v = nu.value();
  const double a = (v - 1.0) / v;
  const double b = 1.0 / v;
  return {"weighted-log:" + std::to_string(v), [a, b](double x) {
            const double m = 1.0 - x;
            const double p = 1.0 + x;
            return DerivativeTriple{x, a / m - b / p, a / (m * m) + b / (p * p),
                                    2.0 * a / (m * m * m) - 2.0 * b / (p * p * p)};
          }};
}

/// Oracle defined only at tabulated abscissae (exact match).
inline BarrierOracle tabulated_barrier(std::string name, const std::vector<DerivativeTriple>& rows) {
  std::map<double, DerivativeTriple> table;
  for (const auto& r : rows) table[r.x] = r;
  return {std::move(name), [table = std::move(table)](double x) {
            const auto it = table.find(x);
            if (it == table.end()) throw DomainError("no tabulated row at x=" + std::to_string(x));
            return it->second;
          }};
}

/// Interior points of the uniform grid with `nodes` nodes on [-1, 1].
inline std::vector<double> interior_grid(int nodes) {
  if (nodes < 3) throw DomainError("interior_grid needs at least 3 nodes");
  std::vector<double> xs;
  for (int k = 1; k < nodes - 1; ++k) xs.push_back(-1.0 + 2.0 * static_cast<double>(k) / (nodes - 1));
  return xs;
}

struct Violation {
  enum class Kind { point, pair };
  Kind kind;
  double x0;  // NaN for point violations
  double x;
  std::string condition;
  double residual;  // amount by which the inequality fails, > 0
};

inline const char* to_string(Violation::Kind k) { return k == Violation::Kind::point ? "point" : "pair"; }

namespace detail {
inline void point_violations(ParameterNu nu, double gamma, const DerivativeTriple& t, std::vector<Violation>& out) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double curvature = t.h - t.p * t.p;
  if (!(curvature > 0.0)) {
    out.push_back({Violation::Kind::point, nan, t.x, "curvature", -curvature});
    return;
  }
  const NormalizedTriple n = normalize_triple(t);
  const ChainSlacks s = chain_slacks(nu, n.x1, n.x2);
  const std::pair<const char*, double> chains[] = {{"chain_plus_lower", s.plus_lower},
                                                   {"chain_plus_upper", s.plus_upper},
                                                   {"chain_minus_lower", s.minus_lower},
                                                   {"chain_minus_upper", s.minus_upper}};
  for (const auto& [name, slack] : chains) {
    if (slack < -kMembershipTol) out.push_back({Violation::Kind::point, nan, t.x, name, -slack});
  }
  const Slab slab = make_slab(gamma, n.x1, n.x2);
  if (n.x3 < slab.lo - kMembershipTol) out.push_back({Violation::Kind::point, nan, t.x, "slab_lower", slab.lo - n.x3});
  if (n.x3 > slab.hi + kMembershipTol) out.push_back({Violation::Kind::point, nan, t.x, "slab_upper", n.x3 - slab.hi});
}
}  // namespace detail

/// Violations ordered by grid index: point conditions at x_i, then the pairs (x_i, x_k) by k.
inline std::vector<Violation> admissibility_report(const BarrierOracle& oracle, ParameterNu nu,
                                                   const std::vector<double>& grid, double eps) {
  if (grid.empty()) throw DomainError("admissibility grid must be nonempty");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(std::abs(grid[i]) < 1.0)) throw DomainError("grid points must lie in (-1,1)");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("grid must be strictly increasing");
  }

  std::vector<DerivativeTriple> triples;
  triples.reserve(grid.size());
  for (double x : grid) {
    try {
      DerivativeTriple t = oracle(x);
      t.x = x;
      triples.push_back(t);
    } catch (const std::exception& e) {
      throw Error("oracle '" + oracle.name + "' failed at x=" + std::to_string(x) + ": " + e.what());
    }
  }

  const GammaValue gamma = gamma_of_nu(nu);
  std::vector<Violation> out;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const DerivativeTriple& t0 = triples[i];
    detail::point_violations(nu, gamma.value(), t0, out);
    if (!(t0.h - t0.p * t0.p > 0.0)) continue;
    const auto init = EnvelopeInitialData::make(t0.x, t0.p, t0.h, gamma);
    for (std::size_t k = 0; k < triples.size(); ++k) {
      if (k == i || hilbert_distance(t0.x, triples[k].x) > eps) continue;
      const double p = triples[k].p;
      try {
        const double lower = envelope_p(Side::minus, init, triples[k].x);
        if (p < lower - kMembershipTol) {
          out.push_back({Violation::Kind::pair, t0.x, triples[k].x, "envelope_lower", lower - p});
        }
      } catch (const EnvelopeBlowup&) {
        // envelope undefined at x: no bound
      }
      try {
        const double upper = envelope_p(Side::plus, init, triples[k].x);
        if (p > upper + kMembershipTol) {
          out.push_back({Violation::Kind::pair, t0.x, triples[k].x, "envelope_upper", p - upper});
        }
      } catch (const EnvelopeBlowup&) {
      }
    }
  }
  return out;
}

}  // namespace screlax
