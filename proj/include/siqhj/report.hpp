#pragma once

#include "siqhj/catalog.hpp"
#include "siqhj/eigenfunctions.hpp"
#include "siqhj/errors.hpp"
#include "siqhj/qhj_residue.hpp"
#include "siqhj/qmf_audit.hpp"
#include "siqhj/schrodinger.hpp"
#include "siqhj/shape_invariance.hpp"
#include "siqhj/susy_ladder.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace siqhj::report {

using json = nlohmann::json;

// ---------------------------------------------------------------- config

struct GridOverride {
  double x_min = 0.0;
  double x_max = 0.0;
  int points = 0;
  bool operator==(const GridOverride &) const = default;
};

struct RunConfig {
  std::string class_id;
  std::optional<double> a, B, omega;
  double hbar = 1.0;
  std::optional<GridOverride> grid;
  std::optional<int> n_max;
  int n = 0;
  double tol = 1e-6; // numeric route, relative to max(1, |E|)
  std::string out;
  std::string format = "csv";
  std::vector<std::string> routes;
  bool show_residues = false;
  bool all = false;
  bool operator==(const RunConfig &) const = default;
};

inline std::string valid_class_list() {
  std::string s;
  for (auto id : all_classes) {
    if (!s.empty())
      s += ", ";
    s += to_string(id);
  }
  return s;
}

inline ClassId require_class(const std::string &text) {
  if (text.empty())
    throw Error(ErrorKind::ConfigError, "no class given; valid ids: " + valid_class_list());
  auto id = parse_class_id(text);
  if (!id)
    throw Error(ErrorKind::ConfigError, "unknown class '" + text + "'; valid ids: " + valid_class_list());
  return *id;
}

inline GridOverride parse_grid(const std::string &text) {
  GridOverride g;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> g.x_min >> c1 >> g.x_max >> c2 >> g.points) || c1 != ':' || c2 != ':' || !is.eof())
    throw Error(ErrorKind::ConfigError, "grid must be MIN:MAX:POINTS, got '" + text + "'");
  if (!(g.x_max > g.x_min) || g.points < 3)
    throw Error(ErrorKind::ConfigError, "grid needs MIN < MAX and at least 3 points");
  return g;
}

inline std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::string format_grid(const GridOverride &g) {
  return shortest(g.x_min) + ":" + shortest(g.x_max) + ":" + std::to_string(g.points);
}

inline json to_json(const RunConfig &c) {
  json j;
  j["class"] = c.class_id;
  if (c.a) j["a"] = *c.a;
  if (c.B) j["B"] = *c.B;
  if (c.omega) j["omega"] = *c.omega;
  j["hbar"] = c.hbar;
  if (c.grid) j["grid"] = format_grid(*c.grid);
  if (c.n_max) j["n_max"] = *c.n_max;
  j["n"] = c.n;
  j["tol"] = c.tol;
  j["out"] = c.out;
  j["format"] = c.format;
  j["routes"] = c.routes;
  j["show_residues"] = c.show_residues;
  j["all"] = c.all;
  return j;
}

inline RunConfig config_from_json(const json &j) {
  if (!j.is_object())
    throw Error(ErrorKind::ConfigError, "config must be a JSON object");
  static const std::vector<std::string> known{"class", "a",   "B",   "omega",  "hbar",   "grid",          "n_max",
                                              "n",     "tol", "out", "format", "routes", "show_residues", "all"};
  RunConfig c;
  try {
    for (auto it = j.begin(); it != j.end(); ++it)
      if (std::find(known.begin(), known.end(), it.key()) == known.end())
        throw Error(ErrorKind::ConfigError, "unknown config key '" + it.key() + "'");
    if (j.contains("class")) c.class_id = j.at("class").get<std::string>();
    if (j.contains("a")) c.a = j.at("a").get<double>();
    if (j.contains("B")) c.B = j.at("B").get<double>();
    if (j.contains("omega")) c.omega = j.at("omega").get<double>();
    if (j.contains("hbar")) c.hbar = j.at("hbar").get<double>();
    if (j.contains("grid")) c.grid = parse_grid(j.at("grid").get<std::string>());
    if (j.contains("n_max")) c.n_max = j.at("n_max").get<int>();
    if (j.contains("n")) c.n = j.at("n").get<int>();
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("format")) c.format = j.at("format").get<std::string>();
    if (j.contains("routes")) c.routes = j.at("routes").get<std::vector<std::string>>();
    if (j.contains("show_residues")) c.show_residues = j.at("show_residues").get<bool>();
    if (j.contains("all")) c.all = j.at("all").get<bool>();
  } catch (const json::exception &e) {
    throw Error(ErrorKind::ConfigError, std::string("bad config value: ") + e.what());
  }
  if (c.format != "csv" && c.format != "json")
    throw Error(ErrorKind::ConfigError, "format must be csv or json");
  return c;
}

// Missing parameters fall back to the shipped preset of the class
inline SuperpotentialSpec spec_from_config(const RunConfig &c) {
  ClassId id = require_class(c.class_id);
  Params p = preset_params(id);
  if (c.a) p.a = c.a;
  if (id == ClassId::IIIA && (c.B || c.omega)) {
    p.B = c.B;
    p.omega = c.omega;
  } else {
    if (c.B) p.B = c.B;
    if (c.omega) p.omega = c.omega;
  }
  p.hbar = c.hbar;
  return make_spec(id, p);
}

inline json spec_json(const SuperpotentialSpec &s) {
  json j;
  j["class"] = std::string(to_string(s.class_id));
  j["a"] = s.a;
  j["B"] = s.B;
  j["omega"] = s.omega;
  j["hbar"] = s.hbar;
  return j;
}

// Usage errors map to exit code 2, everything else that throws to 1
inline bool is_config_error(ErrorKind k) {
  switch (k) {
  case ErrorKind::ConfigError:
  case ErrorKind::InvalidParameter:
  case ErrorKind::InvalidDomain:
  case ErrorKind::NotBound:
  case ErrorKind::UnsupportedClass: return true;
  default: return false;
  }
}

// ---------------------------------------------------------------- tables

inline bool color_enabled() { return std::getenv("NO_COLOR") == nullptr; }

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  return s == "-0.000000" ? "0.000000" : s;
}

inline std::string sci6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

inline std::string pass_label(bool pass, bool color) {
  if (!color)
    return pass ? "PASS" : "FAIL";
  return pass ? "\x1b[32mPASS\x1b[0m" : "\x1b[31mFAIL\x1b[0m";
}

// visible width, skipping ANSI escapes
inline std::size_t display_width(const std::string &s) {
  std::size_t w = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\x1b') {
      while (i < s.size() && s[i] != 'm')
        ++i;
      continue;
    }
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80)
      ++w;
  }
  return w;
}

inline std::string render_table(const std::vector<std::string> &header,
                                const std::vector<std::vector<std::string>> &rows, bool color) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c)
    width[c] = display_width(header[c]);
  for (const auto &r : rows)
    for (std::size_t c = 0; c < r.size() && c < width.size(); ++c)
      width[c] = std::max(width[c], display_width(r[c]));
  auto line = [&](const std::vector<std::string> &cells) {
    std::string s;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      s += cells[c];
      if (c + 1 < cells.size())
        s += std::string(width[c] - display_width(cells[c]) + 2, ' ');
    }
    return s + "\n";
  };
  std::string out;
  std::string head = line(header);
  out += color ? "\x1b[1m" + head.substr(0, head.size() - 1) + "\x1b[0m\n" : head;
  std::string rule;
  for (std::size_t c = 0; c < width.size(); ++c)
    rule += std::string(width[c], '-') + (c + 1 < width.size() ? "  " : "");
  out += rule + "\n";
  for (const auto &r : rows)
    out += line(r);
  return out;
}

inline std::string csv_line(const std::vector<std::string> &cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i)
      s += ',';
    s += cells[i];
  }
  return s + "\n";
}

// ---------------------------------------------------------------- list

inline std::string catalog_table(std::optional<ClassId> only, bool color) {
  std::vector<std::vector<std::string>> rows;
  for (auto id : all_classes) {
    if (only && *only != id)
      continue;
    auto info = class_info(id);
    rows.push_back({std::string(to_string(id)), std::string(info.superpotential), std::string(info.energy),
                    std::string(info.name), std::string(info.constraints)});
  }
  return render_table({"class", "W(x)", "E_n", "potential", "constraints"}, rows, color);
}

// ---------------------------------------------------------------- spectrum

struct Tolerances {
  double qhj = 1e-12;
  double numeric = 1e-6;
};

struct SpectrumRow {
  int n = 0;
  double e_closed = 0.0;
  double e_qhj = 0.0;
  double e_numeric = 0.0;
  double err_qhj = 0.0;     // |E_qhj - E_closed|
  double err_numeric = 0.0; // |E_numeric - E_closed|
};

struct SpectrumReport {
  SuperpotentialSpec spec;
  std::vector<SpectrumRow> rows;
  Tolerances tolerances;
  bool pass = false;
};

inline int default_n_max(const SuperpotentialSpec &spec) {
  auto c = bound_state_count(spec);
  return c.infinite ? 5 : static_cast<int>(std::min<long long>(5, c.count));
}

inline void require_levels(const SuperpotentialSpec &spec, int n_max) {
  auto c = bound_state_count(spec);
  if (n_max < 0 || !c.admits(n_max)) {
    std::ostringstream os;
    os << "n exceeds bound state count " << c.count << " (n_max=" << n_max << ")";
    throw Error(ErrorKind::NotBound, os.str());
  }
}

inline Grid working_grid(const SuperpotentialSpec &spec, const std::optional<GridOverride> &g, int n_top) {
  if (g)
    return uniform_grid(g->x_min, g->x_max, g->points);
  PresetOptions opt;
  opt.n_top = std::max(opt.n_top, n_top);
  return preset_grid(spec, opt);
}

inline SpectrumReport run_spectrum(const SuperpotentialSpec &spec, int n_max, const Tolerances &tol = {},
                                   const std::optional<GridOverride> &grid_override = std::nullopt) {
  require_levels(spec, n_max);
  SpectrumReport rep;
  rep.spec = spec;
  rep.tolerances = tol;
  Grid grid = working_grid(spec, grid_override, n_max);
  auto levels = numeric_levels(hamiltonian_minus(spec), grid, n_max + 1);
  rep.pass = true;
  for (int n = 0; n <= n_max; ++n) {
    SpectrumRow r;
    r.n = n;
    r.e_closed = closed_form_energy(spec, n);
    r.e_qhj = solve_energy_qhj(spec, n).energy;
    r.e_numeric = levels[n].energy;
    r.err_qhj = std::abs(r.e_qhj - r.e_closed);
    r.err_numeric = std::abs(r.e_numeric - r.e_closed);
    const double scale = std::max(1.0, std::abs(r.e_closed));
    rep.pass = rep.pass && r.err_qhj <= tol.qhj * scale && r.err_numeric <= tol.numeric * scale;
    rep.rows.push_back(r);
  }
  return rep;
}

inline std::string spectrum_table(const SpectrumReport &rep, bool color) {
  std::vector<std::vector<std::string>> rows;
  for (const auto &r : rep.rows)
    rows.push_back({std::to_string(r.n), fixed6(r.e_closed), fixed6(r.e_qhj), fixed6(r.e_numeric), sci6(r.err_qhj),
                    sci6(r.err_numeric)});
  return render_table({"n", "E_closed", "E_qhj", "E_numeric", "err_qhj", "err_numeric"}, rows, color) +
         "spectrum " + pass_label(rep.pass, color) + "\n";
}

inline std::string spectrum_csv(const SpectrumReport &rep) {
  std::string s = csv_line({"n", "E_closed", "E_qhj", "E_numeric", "err_qhj_vs_closed", "err_numeric_vs_closed"});
  for (const auto &r : rep.rows)
    s += csv_line({std::to_string(r.n), shortest(r.e_closed), shortest(r.e_qhj), shortest(r.e_numeric),
                   shortest(r.err_qhj), shortest(r.err_numeric)});
  return s;
}

inline json spectrum_json(const SpectrumReport &rep) {
  json j;
  j["spec"] = spec_json(rep.spec);
  j["rows"] = json::array();
  for (const auto &r : rep.rows)
    j["rows"].push_back({{"n", r.n},
                         {"E_closed", r.e_closed},
                         {"E_qhj", r.e_qhj},
                         {"E_numeric", r.e_numeric},
                         {"err_qhj_vs_closed", r.err_qhj},
                         {"err_numeric_vs_closed", r.err_numeric}});
  j["tolerances"] = {{"qhj_relative", rep.tolerances.qhj}, {"numeric_relative", rep.tolerances.numeric}};
  j["pass"] = rep.pass;
  return j;
}

// ---------------------------------------------------------------- verify

struct CheckResult {
  std::string class_id;
  std::string check;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

// 2001 uniform points over the preset range, trimmed to where |W| <= 100 for
// both a and a + hbar so the absolute residual stays meaningful near walls
inline Grid shape_invariance_grid(const SuperpotentialSpec &spec, int points = 2001) {
  Grid base = preset_grid(spec);
  const double lo = base.x_min(), hi = base.x_max();
  const double a1 = spec.a + spec.hbar;
  auto tame = [&](double x) {
    return std::abs(superpotential_at(spec, spec.a, x).W) <= 100.0 &&
           std::abs(superpotential_at(spec, a1, x).W) <= 100.0;
  };
  const int probe = 20001;
  std::vector<double> xs(probe);
  for (int i = 0; i < probe; ++i)
    xs[i] = lo + (hi - lo) * i / (probe - 1);
  // contiguous tame stretch around the zero of W
  const double x0 = find_W_zero(spec);
  int c = static_cast<int>(std::lower_bound(xs.begin(), xs.end(), x0) - xs.begin());
  c = std::clamp(c, 0, probe - 1);
  int left = c, right = c;
  while (left > 0 && tame(xs[left - 1]))
    --left;
  while (right + 1 < probe && tame(xs[right + 1]))
    ++right;
  return uniform_grid(xs[left], xs[right], points);
}

namespace detail {

template <class F> void guarded(std::vector<CheckResult> &out, const std::string &cls, const std::string &name,
                                double tol, F &&body) {
  CheckResult r{cls, name, 0.0, tol, false, ""};
  try {
    body(r);
  } catch (const std::exception &e) {
    r.pass = false;
    r.detail = e.what();
  }
  out.push_back(r);
}

} // namespace detail

inline std::vector<CheckResult> run_verify(const SuperpotentialSpec &spec) {
  std::vector<CheckResult> out;
  const std::string cls(to_string(spec.class_id));
  const auto count = bound_state_count(spec);
  const int n_max = default_n_max(spec);

  detail::guarded(out, cls, "shape_invariance", 1e-10, [&](CheckResult &r) {
    Grid g = shape_invariance_grid(spec);
    r.value = std::max(si_residual(spec, g), pde1_residual(spec, g));
    r.pass = r.value <= r.tolerance;
    r.detail = "x in [" + fixed6(g.x_min()) + ", " + fixed6(g.x_max()) + "]";
  });

  std::optional<SpectrumReport> spectrum;
  try {
    spectrum = run_spectrum(spec, n_max);
  } catch (const std::exception &e) {
    out.push_back({cls, "spectrum", 0.0, 0.0, false, e.what()});
  }
  if (spectrum) {
    double worst_q = 0.0, worst_n = 0.0;
    for (const auto &row : spectrum->rows) {
      const double scale = std::max(1.0, std::abs(row.e_closed));
      worst_q = std::max(worst_q, row.err_qhj / scale);
      worst_n = std::max(worst_n, row.err_numeric / scale);
    }
    std::string levels = "n<=" + std::to_string(n_max);
    out.push_back({cls, "qhj_vs_closed", worst_q, 1e-12, worst_q <= 1e-12, levels});
    out.push_back({cls, "numeric_vs_closed", worst_n, 1e-6, worst_n <= 1e-6, levels});
    const double e0 = std::abs(spectrum->rows[0].e_numeric);
    out.push_back({cls, "ground_energy", e0, 1e-6, e0 <= 1e-6, ""});
  }

  detail::guarded(out, cls, "annihilation", 1e-6, [&](CheckResult &r) {
    Grid g = preset_grid(spec);
    auto psi0 = groundstate(spec, g);
    auto lowered = apply_A(spec, psi0, LadderSign::Minus);
    r.value = l2_norm(g, lowered.values);
    r.pass = r.value <= r.tolerance;
  });

  for (int n = 0; n <= 1; ++n) {
    if (!count.admits(n + 1))
      continue;
    detail::guarded(out, cls, "isospectrality n=" + std::to_string(n), 1e-6, [&](CheckResult &r) {
      auto iso = isospectrality_check(spec, n, preset_grid(spec));
      r.value = iso.difference;
      r.pass = r.value <= r.tolerance;
      r.detail = "E-=" + fixed6(iso.energy_minus) + " E+=" + fixed6(iso.energy_plus);
    });
  }

  std::optional<CheckResult> ground;
  for (int n = 0; n <= 3; ++n) {
    if (!count.admits(n))
      break;
    detail::guarded(out, cls, "qmf_poles n=" + std::to_string(n), 0.05, [&](CheckResult &r) {
      auto a = audit(spec, n);
      r.value = a.max_residue_error;
      const bool nodes_ok = static_cast<int>(a.node_locations.size()) == n;
      r.pass = nodes_ok && r.value <= r.tolerance;
      r.detail = "nodes=" + std::to_string(a.node_locations.size());
      if (n > 0)
        r.detail += " mean residue=" + fixed6(a.mean_residue);
      if (n == 0)
        ground = CheckResult{cls, "qmf_ground_vs_W", a.qmf_vs_W_interior_error, 1e-4,
                             a.qmf_vs_W_interior_error <= 1e-4, "tail=" + sci6(a.qmf_vs_W_tail_error)};
    });
  }
  if (ground)
    out.push_back(*ground);
  return out;
}

inline bool all_pass(const std::vector<CheckResult> &checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.pass; });
}

inline std::string verify_table(const std::vector<CheckResult> &checks, bool color) {
  std::vector<std::vector<std::string>> rows;
  for (const auto &c : checks)
    rows.push_back({c.class_id, c.check, sci6(c.value), sci6(c.tolerance), pass_label(c.pass, color), c.detail});
  return render_table({"class", "check", "value", "tolerance", "result", "detail"}, rows, color) + "verify " +
         pass_label(all_pass(checks), color) + "\n";
}

inline std::string verify_csv(const std::vector<CheckResult> &checks) {
  std::string s = csv_line({"class", "check", "value", "tolerance", "pass", "detail"});
  for (const auto &c : checks) {
    std::string detail = c.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    s += csv_line({c.class_id, c.check, shortest(c.value), shortest(c.tolerance), c.pass ? "true" : "false",
                   "\"" + detail + "\""});
  }
  return s;
}

inline json verify_json(const std::vector<CheckResult> &checks, const json &spec) {
  json j;
  j["spec"] = spec;
  j["rows"] = json::array();
  json tol = json::object();
  for (const auto &c : checks) {
    j["rows"].push_back({{"class", c.class_id},
                         {"check", c.check},
                         {"value", c.value},
                         {"tolerance", c.tolerance},
                         {"pass", c.pass},
                         {"detail", c.detail}});
    std::string key = c.check.substr(0, c.check.find(' '));
    tol[key] = c.tolerance;
  }
  j["tolerances"] = tol;
  j["pass"] = all_pass(checks);
  return j;
}

// ---------------------------------------------------------------- qhj

struct QhjLevel {
  QuantizationResult result;
  double e_closed = 0.0;
  std::vector<ResidueSolution> poles;
};

struct QhjReport {
  SuperpotentialSpec spec;
  std::vector<QhjLevel> levels;
  double tolerance = 1e-10;
  bool pass = false;
};

inline QhjReport run_qhj(const SuperpotentialSpec &spec, int n_lo, int n_hi) {
  require_levels(spec, n_hi);
  QhjReport rep;
  rep.spec = spec;
  rep.pass = true;
  for (int n = n_lo; n <= n_hi; ++n) {
    QhjLevel lv;
    lv.result = solve_energy_qhj(spec, n);
    lv.e_closed = closed_form_energy(spec, n);
    lv.poles = residue_solutions(spec, lv.result.energy);
    rep.pass = rep.pass && lv.result.residual <= rep.tolerance;
    rep.levels.push_back(std::move(lv));
  }
  return rep;
}

inline std::string complex6(cplx z) {
  if (z.imag() == 0.0)
    return fixed6(z.real());
  return fixed6(z.real()) + (z.imag() < 0 ? "-" : "+") + fixed6(std::abs(z.imag())) + "i";
}

inline std::string qhj_table(const QhjReport &rep, bool show_residues, bool color) {
  std::string out;
  const double mult = siqhj::detail::node_multiplier(rep.spec.class_id);
  std::vector<std::vector<std::string>> rows;
  for (const auto &lv : rep.levels)
    rows.push_back({std::to_string(lv.result.n), fixed6(lv.result.energy), fixed6(lv.e_closed),
                    sci6(lv.result.residual), fixed6(mult * lv.result.n * rep.spec.hbar)});
  out += render_table({"n", "E_qhj", "E_closed", "residual", "moving-pole sum"}, rows, color);
  if (mult != 1.0)
    out += "moving-pole sum counts each node twice: spurious poles on the negative half of the y axis\n";
  if (show_residues) {
    for (const auto &lv : rep.levels) {
      std::vector<std::vector<std::string>> pr;
      for (const auto &r : lv.poles)
        pr.push_back({std::string(to_string(r.pole.variable)), std::string(to_string(r.pole.location)),
                      r.pole.differential, std::string(to_string(r.branch)), complex6(r.b1), complex6(r.a0),
                      complex6(r.a1), complex6(r.contribution)});
      out += "\nn=" + std::to_string(lv.result.n) + "  E=" + fixed6(lv.result.energy) + "\n";
      out += render_table({"variable", "pole", "differential", "branch", "b1", "a0", "a1", "contribution"}, pr,
                          color);
    }
  }
  out += "qhj " + pass_label(rep.pass, color) + "\n";
  return out;
}

inline std::string qhj_csv(const QhjReport &rep) {
  std::string s = csv_line({"n", "energy", "residual", "variable", "pole", "branch", "b1_re", "b1_im", "a0_re",
                            "a0_im", "a1_re", "a1_im", "contribution_re", "contribution_im"});
  for (const auto &lv : rep.levels)
    for (const auto &r : lv.poles)
      s += csv_line({std::to_string(lv.result.n), shortest(lv.result.energy), shortest(lv.result.residual),
                     std::string(to_string(r.pole.variable)), std::string(to_string(r.pole.location)),
                     std::string(to_string(r.branch)), shortest(r.b1.real()), shortest(r.b1.imag()),
                     shortest(r.a0.real()), shortest(r.a0.imag()), shortest(r.a1.real()), shortest(r.a1.imag()),
                     shortest(r.contribution.real()), shortest(r.contribution.imag())});
  return s;
}

inline json qhj_json(const QhjReport &rep) {
  json j;
  j["spec"] = spec_json(rep.spec);
  j["rows"] = json::array();
  for (const auto &lv : rep.levels) {
    json poles = json::array();
    for (const auto &r : lv.poles)
      poles.push_back({{"variable", std::string(to_string(r.pole.variable))},
                       {"pole", std::string(to_string(r.pole.location))},
                       {"differential", r.pole.differential},
                       {"branch", std::string(to_string(r.branch))},
                       {"b1", {r.b1.real(), r.b1.imag()}},
                       {"a0", {r.a0.real(), r.a0.imag()}},
                       {"a1", {r.a1.real(), r.a1.imag()}},
                       {"contribution", {r.contribution.real(), r.contribution.imag()}}});
    j["rows"].push_back({{"n", lv.result.n},
                         {"energy", lv.result.energy},
                         {"E_closed", lv.e_closed},
                         {"residual", lv.result.residual},
                         {"poles", poles}});
  }
  j["tolerances"] = {{"residual", rep.tolerance}};
  j["pass"] = rep.pass;
  return j;
}

// ---------------------------------------------------------------- wavefunction

struct Delta {
  std::string first, second;
  double distance = 0.0;
};

struct WavefunctionReport {
  SuperpotentialSpec spec;
  int n = 0;
  std::vector<double> x;
  std::vector<std::pair<std::string, std::vector<double>>> columns; // ladder, closed, numeric order
  std::vector<Delta> deltas;
  double tolerance = 1e-4;
  bool pass = false;
};

inline std::vector<std::string> default_routes(const SuperpotentialSpec &spec) {
  if (spec.class_id == ClassId::IIB2)
    return {"ladder", "closed", "numeric"};
  return {"ladder", "numeric"};
}

inline WavefunctionReport run_wavefunction(const SuperpotentialSpec &spec, int n, std::vector<std::string> routes,
                                           const std::optional<GridOverride> &grid_override = std::nullopt) {
  require_levels(spec, n);
  if (routes.empty())
    routes = default_routes(spec);
  for (const auto &r : routes)
    if (r != "ladder" && r != "closed" && r != "numeric")
      throw Error(ErrorKind::ConfigError, "unknown route '" + r + "'; use ladder, closed or numeric");
  Grid grid = working_grid(spec, grid_override, n);
  WavefunctionReport rep;
  rep.spec = spec;
  rep.n = n;
  rep.x = grid.x;
  std::vector<std::pair<std::string, WaveFunction>> states;
  for (const char *name : {"ladder", "closed", "numeric"}) {
    if (std::find(routes.begin(), routes.end(), name) == routes.end())
      continue;
    std::string r = name;
    if (r == "ladder")
      states.emplace_back(r, excited_state_via_ladder(spec, n, grid).wavefunction);
    else if (r == "closed")
      states.emplace_back(r, closed_form_eigenfunction(spec, n, grid));
    else
      states.emplace_back(r, numeric_levels(hamiltonian_minus(spec), grid, n + 1)[n]);
  }
  // common sign: positive overlap with the first column
  for (std::size_t k = 1; k < states.size(); ++k)
    if (inner_product(grid, states[0].second.values, states[k].second.values) < 0)
      for (double &v : states[k].second.values)
        v = -v;
  rep.pass = true;
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t k = i + 1; k < states.size(); ++k) {
      Delta d{states[i].first, states[k].first, compare_eigenfunctions(states[i].second, states[k].second)};
      rep.pass = rep.pass && d.distance <= rep.tolerance;
      rep.deltas.push_back(d);
    }
  for (auto &[name, wf] : states)
    rep.columns.emplace_back("psi_" + name, std::move(wf.values));
  return rep;
}

inline std::string wavefunction_csv(const WavefunctionReport &rep) {
  std::vector<std::string> head{"x"};
  for (const auto &c : rep.columns)
    head.push_back(c.first);
  std::string s = csv_line(head);
  for (std::size_t i = 0; i < rep.x.size(); ++i) {
    std::vector<std::string> cells{shortest(rep.x[i])};
    for (const auto &c : rep.columns)
      cells.push_back(shortest(c.second[i]));
    s += csv_line(cells);
  }
  return s;
}

inline json wavefunction_json(const WavefunctionReport &rep, bool with_columns) {
  json j;
  j["spec"] = spec_json(rep.spec);
  j["n"] = rep.n;
  if (with_columns) {
    json cols = json::object();
    cols["x"] = rep.x;
    for (const auto &c : rep.columns)
      cols[c.first] = c.second;
    j["columns"] = cols;
  }
  j["deltas"] = json::array();
  for (const auto &d : rep.deltas)
    j["deltas"].push_back({{"first", d.first}, {"second", d.second}, {"l2_distance", d.distance}});
  j["tolerances"] = {{"l2_distance", rep.tolerance}};
  j["pass"] = rep.pass;
  return j;
}

inline std::string wavefunction_summary(const WavefunctionReport &rep, bool color) {
  std::vector<std::vector<std::string>> rows;
  for (const auto &d : rep.deltas)
    rows.push_back({d.first, d.second, sci6(d.distance)});
  return render_table({"route", "route", "L2 distance"}, rows, color) + "wavefunction " +
         pass_label(rep.pass, color) + "\n";
}

} // namespace siqhj::report
