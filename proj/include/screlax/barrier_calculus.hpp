#pragma once
// One-dimensional self-concordance calculus on the interval (-1, 1).
//
// A candidate f on (-1,1) is described by its derivative triple (p, h, w) =
// (f', f'', f''') at a point x.  The normalization map sends this triple to a
// point of R^3 that does not depend on x, so the pointwise conditions become
// membership of that point in a fixed body (see body.hpp).

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "screlax/core.hpp"

namespace screlax {

inline GammaValue gamma_of_nu(ParameterNu nu) {
  const double v = nu.value();
  return GammaValue((v - 2.0) / std::sqrt(v - 1.0));
}

/// Inverse of gamma_of_nu: nu = 1 + s^2 where s = sqrt(nu - 1) solves s - 1/s = gamma.
inline ParameterNu nu_of_gamma(GammaValue g) {
  const double gv = g.value();
  const double s = 0.5 * (gv + std::sqrt(gv * gv + 4.0));
  // s >= 1, so 1 + s*s >= 2 up to rounding; pin the fixed point.
  return ParameterNu(std::max(2.0, 1.0 + s * s));
}

struct DerivativeTriple {
  double x = 0.0;
  double p = 0.0;
  double h = 0.0;
  double w = 0.0;
};

struct NormalizedTriple {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  [[nodiscard]] BodyPoint point() const { return {x1, x2, x3}; }
};

namespace detail {
inline void require_open_interval(double x, const char* what) {
  if (!(std::abs(x) < 1.0)) {
    throw DomainError(std::string(what) + " must lie in (-1,1), got " + std::to_string(x));
  }
}
}  // namespace detail

inline NormalizedTriple normalize_triple(const DerivativeTriple& t) {
  detail::require_open_interval(t.x, "x");
  const double x = t.x;
  const double q = 1.0 - x * x;
  const double q2 = q * q;
  return {
      q * t.p - x,
      q2 * t.h - 2.0 * x * q * t.p + x * x,
      q2 * q * t.w - 6.0 * x * q2 * t.h + 6.0 * x * x * q * t.p - 2.0 * x * x * x,
  };
}

/// Differences between both sides of the two normalization identities
///   x2 - x1^2 = (1-x^2)^2 (h - p^2),
///   x3 - 6 x2 x1 + 4 x1^3 = (1-x^2)^3 (w - 6hp + 4p^3).
inline std::pair<double, double> normalization_residuals(const DerivativeTriple& t) {
  const NormalizedTriple n = normalize_triple(t);
  const double q = 1.0 - t.x * t.x;
  const double r2 = (n.x2 - n.x1 * n.x1) - q * q * (t.h - t.p * t.p);
  const double r3 = (n.x3 - 6.0 * n.x2 * n.x1 + 4.0 * n.x1 * n.x1 * n.x1) -
                    q * q * q * (t.w - 6.0 * t.h * t.p + 4.0 * t.p * t.p * t.p);
  return {r2, r3};
}

/// Pointwise chain conditions on (f'(x), f''(x)); inclusive at kMembershipTol.
inline bool pointwise_feasible(ParameterNu nu, double x, double p, double h) {
  detail::require_open_interval(x, "x");
  const double curvature = h - p * p;
  if (!(curvature > 0.0)) {
    throw CurvatureError("h - p^2 must be positive, got " + std::to_string(curvature));
  }
  const double g = std::sqrt(curvature);
  const double r = nu.root();
  const double left = p + 1.0 / (1.0 + x);
  const double right = -p + 1.0 / (1.0 - x);
  const double tol = kMembershipTol;
  return g / r <= left + tol && left <= r * g + tol && g / r <= right + tol && right <= r * g + tol;
}

/// Bounds on f'(x) implied by the chain conditions.
inline std::pair<double, double> p_range_bounds(ParameterNu nu, double x) {
  detail::require_open_interval(x, "x");
  const double v = nu.value();
  const double a = 1.0 / (1.0 - x);
  const double b = 1.0 / (1.0 + x);
  return {a / v - (v - 1.0) / v * b, (v - 1.0) / v * a - b / v};
}

/// Bounds on f(x) - f(0) obtained by integrating p_range_bounds.
inline std::pair<double, double> f_range_bounds(ParameterNu nu, double x) {
  detail::require_open_interval(x, "x");
  const double v = nu.value();
  const double ax = std::abs(x);
  const double lp = std::log1p(ax);
  const double lm = std::log1p(-ax);
  return {-(v - 1.0) / v * lp - lm / v, -(v - 1.0) / v * lm - lp / v};
}

enum class Side { plus, minus };

inline const char* to_string(Side s) { return s == Side::plus ? "plus" : "minus"; }

/// Initial data (x0, p0 = f'(x0), h0 = f''(x0)) for the extremal solutions.
struct EnvelopeInitialData {
  double x0;
  double p0;
  double h0;
  GammaValue gamma;

  static EnvelopeInitialData make(double x0, double p0, double h0, GammaValue gamma) {
    detail::require_open_interval(x0, "x0");
    if (!(h0 - p0 * p0 > 0.0)) {
      throw CurvatureError("envelope initial data needs h0 - p0^2 > 0");
    }
    return {x0, p0, h0, gamma};
  }

  [[nodiscard]] double g0() const { return std::sqrt(h0 - p0 * p0); }
};

/// Closed-form extremal solutions p_+ and p_- through (x0, p0) with slope h0.
///
/// Written in d = x - x0 as a ratio of a linear numerator and the quadratic
///   D(d) = 1 + B d + A d^2,  A = p0^2 - g0^2 + s*gamma*g0*p0,  B = -2 p0 - s*gamma*g0,
/// with s = +1 on the plus side.  D(0) = 1, and the solution exists on the
/// connected piece of {D > 0} containing x0.
inline double envelope_p(Side side, const EnvelopeInitialData& init, double x) {
  detail::require_open_interval(x, "x");
  const double s = side == Side::plus ? 1.0 : -1.0;
  const double gamma = init.gamma.value();
  const double g0 = init.g0();
  const double p0 = init.p0;
  const double d = x - init.x0;
  const double num = p0 + d * (g0 * g0 - p0 * p0 - s * gamma * g0 * p0);
  const double den = -g0 * g0 * d * d + (p0 * d - 1.0) * (p0 * d - 1.0) + s * gamma * g0 * d * (p0 * d - 1.0);

  const double guard = kDenominatorTol * std::max(1.0, std::abs(num));
  bool blown = !(den > guard);
  const double A = p0 * p0 - g0 * g0 + s * gamma * g0 * p0;
  const double B = -2.0 * p0 - s * gamma * g0;
  if (!blown && A != 0.0) {
    const double vertex = -B / (2.0 * A);
    const bool between = d > 0.0 ? (vertex > 0.0 && vertex < d) : (vertex < 0.0 && vertex > d);
    if (between && 1.0 + vertex * (B + A * vertex) <= 0.0) blown = true;
  }
  if (blown) {
    throw EnvelopeBlowup("envelope p_" + std::string(to_string(side)) + " undefined at x=" + std::to_string(x) +
                         " for x0=" + std::to_string(init.x0));
  }
  return num / den;
}

/// Residual of p'' = 6 p' p - 4 p^3 +/- 2 gamma (p' - p^2)^{3/2} with central differences.
inline double envelope_ode_residual(Side side, const EnvelopeInitialData& init, double x, double fd_step = kFdStep) {
  if (!(fd_step > 0.0)) throw DomainError("fd_step must be positive");
  const double pm = envelope_p(side, init, x - fd_step);
  const double p = envelope_p(side, init, x);
  const double pp = envelope_p(side, init, x + fd_step);
  const double d1 = (pp - pm) / (2.0 * fd_step);
  const double d2 = (pp - 2.0 * p + pm) / (fd_step * fd_step);
  const double s = side == Side::plus ? 1.0 : -1.0;
  const double radicand = std::max(0.0, d1 - p * p);
  const double rhs = 6.0 * d1 * p - 4.0 * p * p * p + s * 2.0 * init.gamma.value() * radicand * std::sqrt(radicand);
  return d2 - rhs;
}

/// Hilbert metric of (-1,1): |log of the cross ratio|, no 1/2 factor.
inline double hilbert_distance(double x, double y) {
  detail::require_open_interval(x, "x");
  detail::require_open_interval(y, "y");
  return std::abs(std::log(((1.0 - x) * (1.0 + y)) / ((1.0 + x) * (1.0 - y))));
}

}  // namespace screlax
