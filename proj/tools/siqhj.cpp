#include "siqhj/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

using namespace siqhj;
using namespace siqhj::report;

namespace {

struct Flags {
  std::string class_id;
  double a = 0, B = 0, omega = 0, hbar = 1.0, tol = 1e-6;
  int n_max = 0, n = 0;
  std::string grid, format, out, config;
  std::vector<std::string> routes;
  bool show_residues = false, all = false;
  std::map<std::string, CLI::Option *> opts;
};

void add_common(CLI::App *cmd, Flags &f) {
  f.opts["class"] = cmd->add_option("--class", f.class_id, "class id, e.g. IIB2");
  f.opts["a"] = cmd->add_option("--a", f.a, "parameter a");
  f.opts["B"] = cmd->add_option("--B", f.B, "parameter B");
  f.opts["omega"] = cmd->add_option("--omega", f.omega, "frequency omega");
  f.opts["hbar"] = cmd->add_option("--hbar", f.hbar, "Planck constant (default 1)");
  f.opts["n_max"] = cmd->add_option("--n-max", f.n_max, "highest level");
  f.opts["grid"] = cmd->add_option("--grid", f.grid, "uniform grid MIN:MAX:POINTS");
  f.opts["tol"] = cmd->add_option("--tol", f.tol, "numeric-route tolerance, relative");
  f.opts["format"] = cmd->add_option("--format", f.format, "csv or json");
  f.opts["out"] = cmd->add_option("--out", f.out, "output file");
  f.opts["config"] = cmd->add_option("--config", f.config, "JSON config with flat keys matching the flags");
}

RunConfig resolve(const Flags &f) {
  RunConfig c;
  if (f.opts.at("config")->count()) {
    std::ifstream in(f.config);
    if (!in)
      throw Error(ErrorKind::ConfigError, "cannot open config " + f.config);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception &e) {
      throw Error(ErrorKind::ConfigError, std::string("config is not valid JSON: ") + e.what());
    }
    c = config_from_json(j);
  }
  auto given = [&](const char *k) { return f.opts.count(k) && f.opts.at(k)->count() > 0; };
  if (given("class")) c.class_id = f.class_id;
  if (given("a")) c.a = f.a;
  if (given("B")) c.B = f.B;
  if (given("omega")) c.omega = f.omega;
  if (given("hbar")) c.hbar = f.hbar;
  if (given("n_max")) c.n_max = f.n_max;
  if (given("n")) c.n = f.n;
  if (given("grid")) c.grid = parse_grid(f.grid);
  if (given("tol")) c.tol = f.tol;
  if (given("format")) c.format = f.format;
  if (given("out")) c.out = f.out;
  if (given("routes")) c.routes = f.routes;
  if (given("show_residues")) c.show_residues = f.show_residues;
  if (given("all")) c.all = f.all;
  if (c.format != "csv" && c.format != "json")
    throw Error(ErrorKind::ConfigError, "format must be csv or json");
  return c;
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorKind::ConfigError, "cannot write " + path);
  out << text;
}

std::string dump(const json &j) { return j.dump(2) + "\n"; }

int cmd_list(const RunConfig &c) {
  std::optional<ClassId> only;
  if (!c.class_id.empty())
    only = require_class(c.class_id);
  std::cout << catalog_table(only, color_enabled());
  return 0;
}

int cmd_spectrum(const RunConfig &c) {
  auto spec = spec_from_config(c);
  int n_max = c.n_max.value_or(default_n_max(spec));
  Tolerances tol;
  tol.numeric = c.tol;
  auto rep = run_spectrum(spec, n_max, tol, c.grid);
  std::cout << spectrum_table(rep, color_enabled());
  if (!c.out.empty())
    write_file(c.out, c.format == "json" ? dump(spectrum_json(rep)) : spectrum_csv(rep));
  return rep.pass ? 0 : 1;
}

int cmd_verify(const RunConfig &c) {
  std::vector<CheckResult> checks;
  json specs = json::array();
  if (c.all) {
    for (auto id : all_classes) {
      auto spec = preset_spec(id, c.hbar);
      specs.push_back(spec_json(spec));
      auto part = run_verify(spec);
      checks.insert(checks.end(), part.begin(), part.end());
    }
  } else {
    auto spec = spec_from_config(c);
    specs.push_back(spec_json(spec));
    checks = run_verify(spec);
  }
  std::cout << verify_table(checks, color_enabled());
  if (!c.out.empty())
    write_file(c.out, c.format == "json" ? dump(verify_json(checks, specs)) : verify_csv(checks));
  for (const auto &chk : checks)
    if (!chk.pass)
      std::cerr << "failed: " << chk.class_id << " " << chk.check << "\n";
  return all_pass(checks) ? 0 : 1;
}

int cmd_wavefunction(const RunConfig &c) {
  auto spec = spec_from_config(c);
  auto rep = run_wavefunction(spec, c.n, c.routes, c.grid);
  if (c.out.empty()) {
    std::cout << (c.format == "json" ? dump(wavefunction_json(rep, true)) : wavefunction_csv(rep));
  } else {
    if (c.format == "json") {
      write_file(c.out, dump(wavefunction_json(rep, true)));
    } else {
      write_file(c.out, wavefunction_csv(rep));
      write_file(c.out + ".json", dump(wavefunction_json(rep, false)));
    }
    std::cout << wavefunction_summary(rep, color_enabled());
  }
  return rep.pass ? 0 : 1;
}

int cmd_qhj(const RunConfig &c, bool n_given) {
  auto spec = spec_from_config(c);
  int lo = 0, hi = c.n_max.value_or(default_n_max(spec));
  if (n_given)
    lo = hi = c.n;
  auto rep = run_qhj(spec, lo, hi);
  std::cout << qhj_table(rep, c.show_residues, color_enabled());
  if (!c.out.empty())
    write_file(c.out, c.format == "json" ? dump(qhj_json(rep)) : qhj_csv(rep));
  return rep.pass ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Shape-invariant superpotentials: spectra, ladder states, quantum Hamilton-Jacobi residues"};
  app.require_subcommand(1);

  Flags fl, fs, fv, fw, fq;
  auto *list = app.add_subcommand("list", "catalog of the ten classes");
  add_common(list, fl);
  auto *spectrum = app.add_subcommand("spectrum", "closed-form, QHJ and numeric energies");
  add_common(spectrum, fs);
  auto *verify = app.add_subcommand("verify", "run every consistency check");
  add_common(verify, fv);
  fv.opts["all"] = verify->add_flag("--all", fv.all, "all shipped presets");
  auto *wave = app.add_subcommand("wavefunction", "eigenfunction columns for plotting");
  add_common(wave, fw);
  fw.opts["n"] = wave->add_option("--n", fw.n, "level");
  fw.opts["routes"] = wave->add_option("--routes", fw.routes, "ladder, closed, numeric")->delimiter(',');
  auto *qhj = app.add_subcommand("qhj", "quantization from fixed-pole residues");
  add_common(qhj, fq);
  fq.opts["n"] = qhj->add_option("--n", fq.n, "single level");
  fq.opts["show_residues"] = qhj->add_flag("--show-residues", fq.show_residues, "print the pole table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*list)
      return cmd_list(resolve(fl));
    if (*spectrum)
      return cmd_spectrum(resolve(fs));
    if (*verify)
      return cmd_verify(resolve(fv));
    if (*wave)
      return cmd_wavefunction(resolve(fw));
    if (*qhj)
      return cmd_qhj(resolve(fq), fq.opts.at("n")->count() > 0);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_config_error(e.kind()) ? 2 : 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
