#pragma once
// Shared vocabulary: tolerances, error types, and the barrier parameter types.

#include <cmath>
#include <stdexcept>
#include <string>

namespace screlax {

/// Absolute tolerance on every scalar membership inequality (sets are closed).
inline constexpr double kMembershipTol = 1e-9;
/// Envelope denominators below kDenominatorTol * max(1, |numerator|) count as a blow-up.
inline constexpr double kDenominatorTol = 1e-12;
/// Default central finite-difference step.
inline constexpr double kFdStep = 1e-4;
/// Facets with |n3| at or below this are treated as vertical.
inline constexpr double kNormalTol = 1e-12;
/// Relative hull tolerance; multiplied by the bounding-box diameter of the input.
inline constexpr double kHullRelTol = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// h - p^2 <= 0: the curvature condition fails, so no normalized point exists.
class CurvatureError : public Error {
 public:
  using Error::Error;
};

/// Closed-form envelope left its interval of definition.
class EnvelopeBlowup : public Error {
 public:
  using Error::Error;
};

/// Point outside the feasible (x1,x2) region where one is required.
class RegionError : public Error {
 public:
  using Error::Error;
};

/// Operation needs a full-dimensional hull.
class DegenerateMeshError : public Error {
 public:
  using Error::Error;
};

/// Bisection predicate still false at the cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Barrier parameter, nu >= 2.
class ParameterNu {
 public:
  explicit ParameterNu(double nu) : nu_(nu) {
    if (!(nu >= 2.0) || !std::isfinite(nu)) {
      throw DomainError("barrier parameter must satisfy nu >= 2, got " + std::to_string(nu));
    }
  }
  [[nodiscard]] double value() const noexcept { return nu_; }
  /// sqrt(nu - 1), the ratio bound in the inequality chains.
  [[nodiscard]] double root() const noexcept { return std::sqrt(nu_ - 1.0); }

  friend bool operator==(ParameterNu, ParameterNu) = default;
  friend auto operator<=>(ParameterNu, ParameterNu) = default;

 private:
  double nu_;
};

/// gamma = (nu - 2) / sqrt(nu - 1), gamma >= 0.
class GammaValue {
 public:
  explicit GammaValue(double gamma) : gamma_(gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
      throw DomainError("gamma must be finite and >= 0, got " + std::to_string(gamma));
    }
  }
  [[nodiscard]] double value() const noexcept { return gamma_; }

  friend bool operator==(GammaValue, GammaValue) = default;

 private:
  double gamma_;
};

/// Point of R^3 in (x1, x2, x3) coordinates; also used as a plain vector.
struct BodyPoint {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  friend bool operator==(const BodyPoint&, const BodyPoint&) = default;
  friend auto operator<=>(const BodyPoint&, const BodyPoint&) = default;
};

inline BodyPoint operator+(BodyPoint a, BodyPoint b) { return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3}; }
inline BodyPoint operator-(BodyPoint a, BodyPoint b) { return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3}; }
inline BodyPoint operator*(double s, BodyPoint a) { return {s * a.x1, s * a.x2, s * a.x3}; }
inline double dot(BodyPoint a, BodyPoint b) { return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3; }
inline BodyPoint cross(BodyPoint a, BodyPoint b) {
  return {a.x2 * b.x3 - a.x3 * b.x2, a.x3 * b.x1 - a.x1 * b.x3, a.x1 * b.x2 - a.x2 * b.x1};
}
inline double norm(BodyPoint a) { return std::sqrt(dot(a, a)); }

}  // namespace screlax
