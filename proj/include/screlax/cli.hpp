#pragma once
// Command-line front end.  Exit codes: 0 success, 1 check verdict, 2 numeric
// failure, 3 I/O, 4 usage.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "screlax/admissibility.hpp"
#include "screlax/io.hpp"
#include "screlax/relaxation.hpp"
#include "screlax/svg.hpp"

namespace screlax::cli {

enum ExitCode : int { kOk = 0, kVerdict = 1, kNumeric = 2, kIo = 3, kUsage = 4 };

enum class Command { body, projection, hull, sweep, converge, check };
enum class Format { csv, json, off, svg };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::body: return "body";
    case Command::projection: return "projection";
    case Command::hull: return "hull";
    case Command::sweep: return "sweep";
    case Command::converge: return "converge";
    case Command::check: return "check";
  }
  return "?";
}

inline const char* to_string(Format f) {
  switch (f) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::off: return "off";
    case Format::svg: return "svg";
  }
  return "?";
}

/// Raw values as given on the command line or in a config file.
struct RawOptions {
  std::optional<double> nu, nu_min, nu_max, step, tol, eps, cap;
  std::optional<int> count;
  std::optional<unsigned> threads;
  std::optional<std::string> barrier, format, out;
  std::optional<bool> overlay;
};

struct RunConfig {
  Command command = Command::sweep;
  std::optional<double> nu;
  double nu_min = 2.1;
  double nu_max = 5.1;
  int count = 101;
  double step = 0.012;
  double tol = 1e-6;
  double eps = 0.5;
  double cap = 64.0;
  unsigned threads = 0;
  std::string barrier;
  Format format = Format::csv;
  std::string out;  // empty: stdout
  bool overlay = false;
};

namespace detail {

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  if (s == "off") return Format::off;
  if (s == "svg") return Format::svg;
  throw UsageError("--format: unknown format '" + s + "'");
}

inline void merge_config_file(RawOptions& raw, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> kv;
  try {
    kv = io::read_config(in, path);
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
  const auto number = [&](const std::string& key, const std::string& v) {
    try {
      return io::parse_double(v);
    } catch (const ParseError&) {
      throw UsageError("config '" + path + "': " + key + " is not a number: '" + v + "'");
    }
  };
  for (const auto& [key, value] : kv) {
    if (key == "nu") {
      if (!raw.nu) raw.nu = number(key, value);
    } else if (key == "nu-min") {
      if (!raw.nu_min) raw.nu_min = number(key, value);
    } else if (key == "nu-max") {
      if (!raw.nu_max) raw.nu_max = number(key, value);
    } else if (key == "step") {
      if (!raw.step) raw.step = number(key, value);
    } else if (key == "tol") {
      if (!raw.tol) raw.tol = number(key, value);
    } else if (key == "eps") {
      if (!raw.eps) raw.eps = number(key, value);
    } else if (key == "cap") {
      if (!raw.cap) raw.cap = number(key, value);
    } else if (key == "count") {
      const double c = number(key, value);
      if (c != std::floor(c)) throw UsageError("config '" + path + "': count must be an integer");
      if (!raw.count) raw.count = static_cast<int>(c);
    } else if (key == "threads") {
      const double t = number(key, value);
      if (t < 0 || t != std::floor(t)) throw UsageError("config '" + path + "': threads must be a count");
      if (!raw.threads) raw.threads = static_cast<unsigned>(t);
    } else if (key == "barrier") {
      if (!raw.barrier) raw.barrier = value;
    } else if (key == "format") {
      if (!raw.format) raw.format = value;
    } else if (key == "out") {
      if (!raw.out) raw.out = value;
    } else if (key == "overlay") {
      if (value != "true" && value != "false") throw UsageError("config '" + path + "': overlay must be true/false");
      if (!raw.overlay) raw.overlay = value == "true";
    } else {
      throw UsageError("config '" + path + "': unknown key '" + key + "'");
    }
  }
}

}  // namespace detail

/// Applies command defaults and rejects invalid combinations, naming the field.
inline RunConfig resolve(Command cmd, const RawOptions& raw) {
  RunConfig cfg;
  cfg.command = cmd;
  cfg.nu = raw.nu;
  cfg.nu_min = raw.nu_min.value_or(cfg.nu_min);
  cfg.nu_max = raw.nu_max.value_or(cfg.nu_max);
  cfg.count = raw.count.value_or(cfg.count);
  cfg.step = raw.step.value_or(cfg.step);
  cfg.tol = raw.tol.value_or(cfg.tol);
  cfg.eps = raw.eps.value_or(cfg.eps);
  cfg.cap = raw.cap.value_or(cfg.cap);
  cfg.threads = raw.threads.value_or(0);
  cfg.barrier = raw.barrier.value_or("");
  cfg.out = raw.out.value_or("");
  cfg.overlay = raw.overlay.value_or(false);
  cfg.format = raw.format ? detail::parse_format(*raw.format) : (cmd == Command::hull ? Format::off : Format::csv);

  const auto need_nu = [&] {
    if (!cfg.nu) throw UsageError("--nu is required for '" + std::string(to_string(cmd)) + "'");
    if (!(*cfg.nu >= 2.0) || !std::isfinite(*cfg.nu)) throw UsageError("--nu must be >= 2");
  };
  const auto allow = [&](std::initializer_list<Format> ok) {
    for (Format f : ok) {
      if (f == cfg.format) return;
    }
    throw UsageError("--format " + std::string(to_string(cfg.format)) + " is not supported by '" +
                     std::string(to_string(cmd)) + "'");
  };
  if (!(cfg.step > 0.0) || !std::isfinite(cfg.step)) throw UsageError("--step must be positive");
  if (!(cfg.tol > 0.0)) throw UsageError("--tol must be positive");
  if (!(cfg.eps > 0.0)) throw UsageError("--eps must be positive");

  switch (cmd) {
    case Command::body:
      need_nu();
      allow({Format::csv, Format::json, Format::svg});
      break;
    case Command::projection:
      need_nu();
      allow({Format::csv, Format::svg});
      break;
    case Command::hull:
      need_nu();
      allow({Format::off, Format::json});
      break;
    case Command::sweep:
    case Command::converge:
      if (!(cfg.nu_min >= 2.0)) throw UsageError("--nu-min must be >= 2");
      if (!(cfg.nu_max > cfg.nu_min)) throw UsageError("--nu-max must exceed --nu-min");
      if (cfg.count < 2) throw UsageError("--count must be >= 2");
      if (!(cfg.cap > cfg.nu_max)) throw UsageError("--cap must exceed --nu-max");
      allow({Format::csv, Format::json, Format::svg});
      break;
    case Command::check:
      need_nu();
      if (cfg.barrier.empty()) throw UsageError("--barrier is required for 'check'");
      if (cfg.count < 3) throw UsageError("--count must be >= 3 for 'check'");
      allow({Format::csv});
      break;
  }
  return cfg;
}

namespace detail {

inline void emit(const RunConfig& cfg, const std::string& text, std::ostream& stdout_stream) {
  if (cfg.out.empty()) {
    stdout_stream << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw IoError("cannot write '" + cfg.out + "'");
  f << text;
  if (!f) throw IoError("write failed for '" + cfg.out + "'");

  // Run metadata with wall-clock time goes to a sidecar so data files stay reproducible.
  std::ofstream log(cfg.out + ".log");
  if (log) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    log << "command=" << to_string(cfg.command) << "\nformat=" << to_string(cfg.format)
        << "\nstep=" << io::format_double(cfg.step) << "\ntol=" << io::format_double(cfg.tol)
        << "\ntimestamp=" << stamp << '\n';
  }
}

inline std::string dump(const io::Json& j) { return j.dump(2) + "\n"; }

inline BarrierOracle select_barrier(const std::string& spec) {
  if (spec == "symmetric-log") return symmetric_log_barrier();
  if (spec.rfind("weighted-log", 0) == 0) {
    double own = 3.0;
    if (spec.size() > 12) {
      if (spec[12] != ':') throw UsageError("--barrier: expected weighted-log[:nu], got '" + spec + "'");
      try {
        own = io::parse_double(spec.substr(13));
      } catch (const ParseError&) {
        throw UsageError("--barrier: bad weighted-log parameter in '" + spec + "'");
      }
      if (!(own >= 2.0)) throw UsageError("--barrier: weighted-log parameter must be >= 2");
    }
    return weighted_log_barrier(ParameterNu(own));
  }
  std::ifstream in(spec);
  if (!in) throw IoError("cannot read tabulated barrier '" + spec + "'");
  return tabulated_barrier(spec, io::read_tabulated_barrier(in, spec));
}

inline std::vector<double> check_grid(const RunConfig& cfg, const BarrierOracle& oracle) {
  if (oracle.name == "symmetric-log" || oracle.name.rfind("weighted-log", 0) == 0) return interior_grid(cfg.count);
  // tabulated: the file's own abscissae
  std::ifstream in(cfg.barrier);
  std::vector<double> xs;
  for (const auto& r : io::read_tabulated_barrier(in, cfg.barrier)) xs.push_back(r.x);
  return xs;
}

}  // namespace detail

/// Runs one resolved command; returns the exit code.
inline int execute(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  NuTildeOptions opts;
  opts.tol = cfg.tol;
  opts.cap = cfg.cap;

  switch (cfg.command) {
    case Command::body: {
      const ParameterNu nu(*cfg.nu);
      const SurfaceSample s = sample_surface(nu, Grid2D::covering(feasible_region(nu), cfg.step));
      std::ostringstream os;
      if (cfg.format == Format::csv) io::write_surface_csv(os, s);
      if (cfg.format == Format::json) os << detail::dump(io::surface_json(s));
      if (cfg.format == Format::svg) os << svg::render(svg::body_figure(s));
      detail::emit(cfg, os.str(), out);
      return kOk;
    }
    case Command::projection: {
      const ParameterNu nu(*cfg.nu);
      std::ostringstream os;
      if (cfg.format == Format::svg) {
        os << svg::render(svg::projection_figure(nu, cfg.overlay));
      } else {
        os << "series,x1,x2\n";
        for (const auto& s : svg::projection_polylines(nu, cfg.overlay)) {
          for (const auto& [x, y] : s.data) os << s.label << ',' << io::format_double(x) << ',' << io::format_double(y) << '\n';
        }
      }
      detail::emit(cfg, os.str(), out);
      return kOk;
    }
    case Command::hull: {
      const ParameterNu nu(*cfg.nu);
      const RelaxedBody body = relaxed_body(nu, cfg.step, opts.sampling);
      std::ostringstream os;
      if (cfg.format == Format::off) io::write_hull_off(os, body.hull);
      if (cfg.format == Format::json) os << detail::dump(io::hull_json(body.hull));
      detail::emit(cfg, os.str(), out);
      return kOk;
    }
    case Command::sweep: {
      const NuTildeCurve c = sweep_partial(cfg.nu_min, cfg.nu_max, cfg.count, cfg.step, opts, cfg.threads);
      std::ostringstream os;
      if (cfg.format == Format::csv) io::write_curve_csv(os, c);
      if (cfg.format == Format::json) os << detail::dump(io::curve_json(c));
      if (cfg.format == Format::svg) os << svg::render(svg::curve_figure(c));
      detail::emit(cfg, os.str(), out);
      if (!c.complete()) {
        for (std::size_t i = 0; i < c.errors.size(); ++i) {
          if (!c.errors[i].empty()) err << "nu=" << io::format_double(c.nu_values[i]) << ": " << c.errors[i] << '\n';
        }
        return kNumeric;
      }
      return kOk;
    }
    case Command::converge: {
      std::array<NuTildeCurve, 3> curves;
      for (int k = 0; k < 3; ++k) {
        curves[k] = sweep_partial(cfg.nu_min, cfg.nu_max, cfg.count, cfg.step * (1 << k), opts, cfg.threads);
      }
      const ConvergenceReport r = assemble_convergence(cfg.step, std::move(curves));
      std::ostringstream os;
      if (cfg.format == Format::csv) io::write_convergence_csv(os, r);
      if (cfg.format == Format::json) os << detail::dump(io::convergence_json(r));
      if (cfg.format == Format::svg) os << svg::render(svg::convergence_figure(r));
      detail::emit(cfg, os.str(), out);
      out << "delta_4s=" << io::format_double(r.delta_4s) << "\ndelta_2s=" << io::format_double(r.delta_2s) << '\n';
      bool complete = true;
      for (const auto& c : r.curves) complete = complete && c.complete();
      return complete ? kOk : kNumeric;
    }
    case Command::check: {
      const BarrierOracle oracle = detail::select_barrier(cfg.barrier);
      const auto grid = detail::check_grid(cfg, oracle);
      const auto violations = admissibility_report(oracle, ParameterNu(*cfg.nu), grid, cfg.eps);
      std::ostringstream os;
      io::write_violations_csv(os, violations);
      detail::emit(cfg, os.str(), out);
      err << oracle.name << " at nu=" << io::format_double(*cfg.nu) << ": "
          << (violations.empty() ? std::string("no violation found") : std::to_string(violations.size()) + " violations")
          << '\n';
      return violations.empty() ? kOk : kVerdict;
    }
  }
  return kUsage;
}

/// Full entry point: parse, resolve, execute, map errors to exit codes.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Convex relaxation of the barrier parameter: bodies, hulls, nu_tilde sweeps, barrier checks",
               "screlax"};
  app.require_subcommand(1);
  RawOptions raw;
  std::string config_path;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--nu", raw.nu, "barrier parameter nu >= 2");
    sub->add_option("--step", raw.step, "(x1,x2) lattice step [0.012]");
    sub->add_option("--tol", raw.tol, "bisection tolerance [1e-6]");
    sub->add_option("--format", raw.format, "csv | json | off | svg");
    sub->add_option("--out", raw.out, "output path [stdout]");
    sub->add_option("--config", config_path, "key=value config file; flags override it");
  };
  const auto add_range = [&](CLI::App* sub) {
    sub->add_option("--nu-min", raw.nu_min, "sweep start [2.1]");
    sub->add_option("--nu-max", raw.nu_max, "sweep end [5.1]");
    sub->add_option("--count", raw.count, "number of nu values [101]");
    sub->add_option("--cap", raw.cap, "bisection cap for nu_tilde [64]");
    sub->add_option("--threads", raw.threads, "worker threads, 0 = hardware [0]");
  };

  std::vector<std::pair<CLI::App*, Command>> subs;
  auto* body = app.add_subcommand("body", "sample the surface of P_nu");
  add_common(body);
  subs.emplace_back(body, Command::body);
  auto* proj = app.add_subcommand("projection", "arcs, chords and corners of the (x1,x2) projection");
  add_common(proj);
  proj->add_flag("--overlay", raw.overlay, "also draw the region at the analytic lower bound");
  subs.emplace_back(proj, Command::projection);
  auto* hull = app.add_subcommand("hull", "convex hull of the sampled body");
  add_common(hull);
  subs.emplace_back(hull, Command::hull);
  auto* sw = app.add_subcommand("sweep", "nu_tilde over a range of nu");
  add_common(sw);
  add_range(sw);
  subs.emplace_back(sw, Command::sweep);
  auto* conv = app.add_subcommand("converge", "sweeps at steps s, 2s, 4s and their deltas");
  add_common(conv);
  add_range(conv);
  subs.emplace_back(conv, Command::converge);
  auto* chk = app.add_subcommand("check", "admissibility report for a 1-D barrier");
  add_common(chk);
  chk->add_option("--barrier", raw.barrier, "symmetric-log | weighted-log[:nu] | path to x,p,h,w CSV");
  chk->add_option("--eps", raw.eps, "Hilbert radius for envelope pairs [0.5]");
  chk->add_option("--count", raw.count, "uniform grid nodes on [-1,1], interior ones used [101]");
  subs.emplace_back(chk, Command::check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  try {
    Command cmd = Command::sweep;
    for (const auto& [sub, c] : subs) {
      if (sub->parsed()) cmd = c;
    }
    if (!config_path.empty()) detail::merge_config_file(raw, config_path);
    return execute(resolve(cmd, raw), out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  }
}

}  // namespace screlax::cli
