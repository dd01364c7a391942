#pragma once
// Data-faithful SVG figures: points and polylines only, fixed formatting, so
// identical inputs give byte-identical files.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "screlax/body.hpp"
#include "screlax/relaxation.hpp"

namespace screlax::svg {

enum class FigureKind { body3d, projection2d, nutilde_curve, convergence };

struct Series {
  enum class Style { points, line, dashed };
  std::string label;
  Style style = Style::line;
  std::string color = "#1f77b4";
  std::vector<std::pair<double, double>> data;
};

struct FigureSpec {
  FigureKind kind;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::pair<double, double> x_range;
  std::pair<double, double> y_range;
  std::vector<Series> series;
};

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

namespace detail {
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}
inline std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

inline std::pair<double, double> padded(double lo, double hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}
}  // namespace detail

/// Axis ranges covering every finite data point, padded by 5%.
inline void fit_ranges(FigureSpec& fig) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : fig.series) {
    for (const auto& [x, y] : s.data) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!std::isfinite(x0)) x0 = x1 = y0 = y1 = 0.0;
  fig.x_range = detail::padded(x0, x1);
  fig.y_range = detail::padded(y0, y1);
}

inline std::string render(const FigureSpec& fig) {
  constexpr double W = 720, H = 480, L = 70, R = 170, T = 40, B = 55;
  const double pw = W - L - R, ph = H - T - B;
  const auto [xa, xb] = fig.x_range;
  const auto [ya, yb] = fig.y_range;
  const auto sx = [&](double x) { return L + (x - xa) / (xb - xa) * pw; };
  const auto sy = [&](double y) { return T + ph - (y - ya) / (yb - ya) * ph; };
  using detail::num;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(L + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << fig.title
     << "</text>\n";
  os << "<rect x=\"" << num(L) << "\" y=\"" << num(T) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = xa + (xb - xa) * k / 5.0;
    const double yv = ya + (yb - ya) * k / 5.0;
    os << "<line x1=\"" << num(sx(xv)) << "\" y1=\"" << num(T + ph) << "\" x2=\"" << num(sx(xv)) << "\" y2=\""
       << num(T + ph + 5) << "\" stroke=\"black\"/>";
    os << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(T + ph + 18) << "\" text-anchor=\"middle\">"
       << detail::tick(xv) << "</text>\n";
    os << "<line x1=\"" << num(L - 5) << "\" y1=\"" << num(sy(yv)) << "\" x2=\"" << num(L) << "\" y2=\""
       << num(sy(yv)) << "\" stroke=\"black\"/>";
    os << "<text x=\"" << num(L - 8) << "\" y=\"" << num(sy(yv) + 4) << "\" text-anchor=\"end\">" << detail::tick(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << num(L + pw / 2) << "\" y=\"" << num(H - 12) << "\" text-anchor=\"middle\">" << fig.x_label
     << "</text>\n";
  os << "<text x=\"16\" y=\"" << num(T + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << num(T + ph / 2) << ")\">" << fig.y_label << "</text>\n";

  for (std::size_t si = 0; si < fig.series.size(); ++si) {
    const Series& s = fig.series[si];
    os << "<g id=\"series-" << si << "\">\n";
    if (s.style == Series::Style::points) {
      for (const auto& [x, y] : s.data) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        os << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"1.2\" fill=\"" << s.color
           << "\"/>\n";
      }
    } else if (!s.data.empty()) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
      if (s.style == Series::Style::dashed) os << " stroke-dasharray=\"5,3\"";
      os << " points=\"";
      bool first = true;
      for (const auto& [x, y] : s.data) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        os << (first ? "" : " ") << num(sx(x)) << ',' << num(sy(y));
        first = false;
      }
      os << "\"/>\n";
    }
    os << "</g>\n";
    const double ly = T + 14 + 18.0 * static_cast<double>(si);
    os << "<line x1=\"" << num(W - R + 12) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(W - R + 32)
       << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"3\"/>";
    os << "<text x=\"" << num(W - R + 38) << "\" y=\"" << num(ly) << "\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// ---- figure builders --------------------------------------------------------

/// Oblique projection of both sheets: screen = (x1 + 0.45 x2, x3 + 0.3 x2).
inline FigureSpec body_figure(const SurfaceSample& s) {
  FigureSpec fig{FigureKind::body3d, "P(nu), nu = " + detail::tick(s.nu.value()), "x1 + 0.45 x2", "x3 + 0.3 x2",
                 {}, {}, {}};
  Series lo{"lower sheet", Series::Style::points, kPalette[0], {}};
  Series hi{"upper sheet", Series::Style::points, kPalette[1], {}};
  Series bd{"boundary", Series::Style::points, kPalette[2], {}};
  for (const auto& p : s.points) {
    const std::pair<double, double> xy{p.point.x1 + 0.45 * p.point.x2, p.point.x3 + 0.3 * p.point.x2};
    (p.sheet == Sheet::lo ? lo : p.sheet == Sheet::hi ? hi : bd).data.push_back(xy);
  }
  for (auto* ser : {&lo, &hi, &bd}) {
    if (!ser->data.empty()) fig.series.push_back(std::move(*ser));
  }
  fit_ranges(fig);
  return fig;
}

/// Labelled polylines of the (x1,x2) projection: four arcs, two chords, corners,
/// and optionally the arcs of the region at the analytic lower bound.
inline std::vector<Series> projection_polylines(ParameterNu nu, bool overlay, int samples = 101) {
  std::vector<Series> out;
  const auto arcs_of = [&](ParameterNu v, const std::string& prefix, const char* color, Series::Style style) {
    const FeasibleRegion r = feasible_region(v);
    const char* names[] = {"upper-left", "upper-right", "lower-left", "lower-right"};
    for (std::size_t k = 0; k < r.arcs.size(); ++k) {
      const ParabolaArc& arc = r.arcs[k];
      Series s{prefix + names[k], style, color, {}};
      for (int t = 0; t < samples; ++t) {
        const double x1 = arc.x1_from + (arc.x1_to - arc.x1_from) * t / (samples - 1);
        s.data.emplace_back(x1, arc(x1));
      }
      out.push_back(std::move(s));
    }
  };
  if (nu.value() == 2.0) {
    out.push_back({"corner", Series::Style::points, kPalette[3], {{0.0, 1.0}}});
    return out;
  }
  arcs_of(nu, "arc ", kPalette[0], Series::Style::line);
  const FeasibleRegion r = feasible_region(nu);
  const double a = r.x1_extent.second;
  out.push_back({"chord left", Series::Style::dashed, kPalette[2], {{-a, 1.0}, {0.0, r.x2_max()}}});
  out.push_back({"chord right", Series::Style::dashed, kPalette[2], {{0.0, r.x2_max()}, {a, 1.0}}});
  Series corners{"corner", Series::Style::points, kPalette[3], {}};
  for (const auto& c : r.corners) corners.data.push_back(c);
  out.push_back(std::move(corners));
  if (overlay) arcs_of(ParameterNu(analytic_lower_bound(nu)), "bound arc ", kPalette[1], Series::Style::line);
  return out;
}

inline FigureSpec projection_figure(ParameterNu nu, bool overlay) {
  std::string title = "projection of P(nu), nu = " + detail::tick(nu.value());
  if (overlay) title += ", bound nu' = " + detail::tick(analytic_lower_bound(nu));
  FigureSpec fig{FigureKind::projection2d, title, "x1", "x2", {}, {}, projection_polylines(nu, overlay)};
  fit_ranges(fig);
  return fig;
}

inline FigureSpec curve_figure(const NuTildeCurve& c) {
  FigureSpec fig{FigureKind::nutilde_curve, "nu_tilde(nu), step " + detail::tick(c.grid_step), "nu", "nu_tilde",
                 {}, {}, {}};
  Series nt{"nu_tilde", Series::Style::line, kPalette[0], {}};
  Series lb{"lower bound", Series::Style::dashed, kPalette[1], {}};
  Series id{"nu", Series::Style::dashed, kPalette[5], {}};
  for (std::size_t i = 0; i < c.nu_values.size(); ++i) {
    const double nu = c.nu_values[i];
    nt.data.emplace_back(nu, c.nu_tilde_values[i]);
    lb.data.emplace_back(nu, analytic_lower_bound(ParameterNu(nu)));
    id.data.emplace_back(nu, nu);
  }
  fig.series = {std::move(nt), std::move(lb), std::move(id)};
  fit_ranges(fig);
  return fig;
}

inline FigureSpec convergence_figure(const ConvergenceReport& r) {
  FigureSpec fig{FigureKind::convergence, "nu_tilde on grids s, 2s, 4s (s = " + detail::tick(r.base_step) + ")",
                 "nu", "nu_tilde", {}, {}, {}};
  const char* names[] = {"s", "2s", "4s"};
  for (std::size_t k = 0; k < r.curves.size(); ++k) {
    Series s{std::string("step ") + names[k], Series::Style::line, kPalette[k], {}};
    for (std::size_t i = 0; i < r.curves[k].nu_values.size(); ++i) {
      s.data.emplace_back(r.curves[k].nu_values[i], r.curves[k].nu_tilde_values[i]);
    }
    fig.series.push_back(std::move(s));
  }
  Series lb{"lower bound", Series::Style::dashed, kPalette[4], {}};
  for (double nu : r.curves[0].nu_values) lb.data.emplace_back(nu, analytic_lower_bound(ParameterNu(nu)));
  fig.series.push_back(std::move(lb));
  fit_ranges(fig);
  return fig;
}

}  // namespace screlax::svg
