#pragma once
// Text serialization: CSV, JSON (stable key order), OFF.  Doubles are written in
// shortest round-trip form so that re-reading reproduces every value exactly.

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "screlax/admissibility.hpp"
#include "screlax/body.hpp"
#include "screlax/hull.hpp"
#include "screlax/relaxation.hpp"

namespace screlax::io {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

inline double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw ParseError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      out.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// ---- body ------------------------------------------------------------------

inline void write_surface_csv(std::ostream& os, const SurfaceSample& s) {
  if (s.degenerate) os << "# degenerate: P_2 is the single point (0,1,0)\n";
  os << "x1,x2,x3,sheet\n";
  for (const auto& p : s.points) {
    os << format_double(p.point.x1) << ',' << format_double(p.point.x2) << ',' << format_double(p.point.x3) << ','
       << to_string(p.sheet) << '\n';
  }
}

inline Json surface_json(const SurfaceSample& s) {
  Json pts = Json::array();
  for (const auto& p : s.points) {
    pts.push_back(Json{{"x1", p.point.x1}, {"x2", p.point.x2}, {"x3", p.point.x3}, {"sheet", to_string(p.sheet)}});
  }
  return Json{{"nu", s.nu.value()}, {"step", s.grid.step}, {"degenerate", s.degenerate}, {"points", std::move(pts)}};
}

struct SurfaceDocument {
  double nu = 0.0;
  double step = 0.0;
  bool degenerate = false;
  std::vector<SurfacePoint> points;
};

inline Sheet parse_sheet(const std::string& s) {
  if (s == "lo") return Sheet::lo;
  if (s == "hi") return Sheet::hi;
  if (s == "boundary") return Sheet::boundary;
  throw ParseError("unknown sheet '" + s + "'");
}

inline SurfaceDocument read_surface_json(std::istream& is) {
  Json doc;
  try {
    doc = Json::parse(is);
    SurfaceDocument out{doc.at("nu").get<double>(), doc.at("step").get<double>(), doc.at("degenerate").get<bool>(), {}};
    for (const auto& p : doc.at("points")) {
      out.points.push_back({{p.at("x1").get<double>(), p.at("x2").get<double>(), p.at("x3").get<double>()},
                            parse_sheet(p.at("sheet").get<std::string>())});
    }
    return out;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("surface JSON: ") + e.what());
  }
}

// ---- hull ------------------------------------------------------------------

inline void write_hull_off(std::ostream& os, const HullMesh& m) {
  os << "OFF\n" << m.vertices.size() << ' ' << m.facets.size() << ' ' << m.edge_count() << '\n';
  for (const auto& v : m.vertices) {
    os << format_double(v.x1) << ' ' << format_double(v.x2) << ' ' << format_double(v.x3) << '\n';
  }
  for (const auto& f : m.facets) os << "3 " << f.v[0] << ' ' << f.v[1] << ' ' << f.v[2] << '\n';
}

inline Json hull_json(const HullMesh& m) {
  Json verts = Json::array();
  for (const auto& v : m.vertices) verts.push_back(Json::array({v.x1, v.x2, v.x3}));
  Json facets = Json::array();
  for (const auto& f : m.facets) {
    facets.push_back(Json{{"v", Json::array({f.v[0], f.v[1], f.v[2]})},
                          {"normal", Json::array({f.normal.x1, f.normal.x2, f.normal.x3})},
                          {"offset", f.offset}});
  }
  Json basis = Json::array();
  for (const auto& b : m.affine_basis) basis.push_back(Json::array({b.x1, b.x2, b.x3}));
  return Json{{"degenerate", m.degenerate},
              {"affine_dim", m.affine_dim},
              {"affine_origin", Json::array({m.affine_origin.x1, m.affine_origin.x2, m.affine_origin.x3})},
              {"affine_basis", std::move(basis)},
              {"tolerance", m.tolerance},
              {"vertices", std::move(verts)},
              {"facets", std::move(facets)}};
}

// ---- curves ----------------------------------------------------------------

inline void write_curve_rows(std::ostream& os, const NuTildeCurve& c, const std::string& prefix) {
  for (std::size_t i = 0; i < c.nu_values.size(); ++i) {
    const double nu = c.nu_values[i];
    os << prefix << format_double(nu) << ',' << format_double(c.nu_tilde_values[i]) << ','
       << format_double(analytic_lower_bound(ParameterNu(nu))) << ',' << format_double(c.argmax_points[i].first)
       << ',' << format_double(c.argmax_points[i].second) << '\n';
  }
}

inline void write_curve_errors(std::ostream& os, const NuTildeCurve& c) {
  for (std::size_t i = 0; i < c.errors.size(); ++i) {
    if (!c.errors[i].empty()) {
      os << "# partial: nu=" << format_double(c.nu_values[i]) << " step=" << format_double(c.grid_step)
         << " failed: " << c.errors[i] << '\n';
    }
  }
}

inline void write_curve_csv(std::ostream& os, const NuTildeCurve& c) {
  write_curve_errors(os, c);
  os << "nu,nu_tilde,lower_bound,argmax_x1,argmax_x2\n";
  write_curve_rows(os, c, "");
}

inline Json curve_json(const NuTildeCurve& c) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < c.nu_values.size(); ++i) {
    Json row{{"nu", c.nu_values[i]},
             {"nu_tilde", c.nu_tilde_values[i]},
             {"lower_bound", analytic_lower_bound(ParameterNu(c.nu_values[i]))},
             {"argmax_x1", c.argmax_points[i].first},
             {"argmax_x2", c.argmax_points[i].second}};
    if (!c.errors[i].empty()) row["error"] = c.errors[i];
    rows.push_back(std::move(row));
  }
  return Json{{"step", c.grid_step}, {"tol", c.tol}, {"complete", c.complete()}, {"points", std::move(rows)}};
}

inline void write_convergence_csv(std::ostream& os, const ConvergenceReport& r) {
  os << "# delta_4s=" << format_double(r.delta_4s) << " delta_2s=" << format_double(r.delta_2s) << '\n';
  for (const auto& c : r.curves) write_curve_errors(os, c);
  os << "step,nu,nu_tilde,lower_bound,argmax_x1,argmax_x2\n";
  for (const auto& c : r.curves) write_curve_rows(os, c, format_double(c.grid_step) + ",");
}

inline Json convergence_json(const ConvergenceReport& r) {
  Json curves = Json::array();
  for (const auto& c : r.curves) curves.push_back(curve_json(c));
  return Json{{"base_step", r.base_step},
              {"delta_4s", r.delta_4s},
              {"delta_2s", r.delta_2s},
              {"curves", std::move(curves)}};
}

// ---- admissibility ---------------------------------------------------------

inline void write_violations_csv(std::ostream& os, const std::vector<Violation>& vs) {
  os << "kind,x0,x,condition,residual\n";
  for (const auto& v : vs) {
    os << to_string(v.kind) << ',' << (v.kind == Violation::Kind::pair ? format_double(v.x0) : std::string()) << ','
       << format_double(v.x) << ',' << v.condition << ',' << format_double(v.residual) << '\n';
  }
}

/// Tabulated barrier: CSV with header x,p,h,w (analytic derivatives); '#' comments allowed.
inline std::vector<DerivativeTriple> read_tabulated_barrier(std::istream& is, const std::string& source) {
  std::vector<DerivativeTriple> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  const auto fail = [&](const std::string& why) {
    throw ParseError(source + ":" + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cells = split(t, ',');
    if (!header) {
      if (cells.size() != 4 || trim(cells[0]) != "x" || trim(cells[1]) != "p" || trim(cells[2]) != "h" ||
          trim(cells[3]) != "w") {
        fail("expected header 'x,p,h,w'");
      }
      header = true;
      continue;
    }
    if (cells.size() != 4) fail("expected 4 columns, got " + std::to_string(cells.size()));
    DerivativeTriple r;
    try {
      r = {parse_double(cells[0]), parse_double(cells[1]), parse_double(cells[2]), parse_double(cells[3])};
    } catch (const ParseError& e) {
      fail(e.what());
    }
    if (!(std::abs(r.x) < 1.0)) fail("x must lie in (-1,1)");
    if (!rows.empty() && !(r.x > rows.back().x)) fail("x must be strictly increasing");
    rows.push_back(r);
  }
  if (!header) {
    lineno = 0;
    fail("missing header 'x,p,h,w'");
  }
  if (rows.empty()) fail("no data rows");
  return rows;
}

/// key=value lines; '#' starts a comment.  Keys are normalized to use '-'.
inline std::map<std::string, std::string> read_config(std::istream& is, const std::string& source) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError(source + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(t.substr(0, eq));
    for (char& ch : key) {
      if (ch == '_') ch = '-';
    }
    if (key.empty()) throw ParseError(source + ":" + std::to_string(lineno) + ": empty key");
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

}  // namespace screlax::io
