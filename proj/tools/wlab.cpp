// wlab: command-line driver for the verification sweeps.
//
// Exit status: 0 when every enabled check passes, 1 when a check fails,
// 2 on malformed input, 3 when a numerical method fails to converge.

#include "wlab/experiments.hpp"
#include "wlab/io.hpp"
#include "wlab/morse.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

using namespace wlab;
using experiments::ExpansionReport;
using nlohmann::json;

namespace {

constexpr int exit_fail = 1;
constexpr int exit_usage = 2;
constexpr int exit_convergence = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::vector<double> eps, eta, r, delta, alphas;
  std::vector<int> sc_counts, betti;
  std::string curvature, grid, out = "out", preset, counts;
  double density = 1.0;
  std::uint64_t seed = experiments::MorseConfig{}.seed;
};

json read_json(const std::string& source) {
  try {
    if (!source.empty() && source.front() == '{') return json::parse(source);
    std::ifstream in(source);
    if (!in) throw UsageError("cannot open " + source);
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
}

Mat3d matrix3(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw UsageError(std::string(what) + " must be a 3x3 array");
  Mat3d m;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_array() || j[i].size() != 3) throw UsageError(std::string(what) + " must be a 3x3 array");
    for (int k = 0; k < 3; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

// {"sc": s, "ric": [[..]]} or {"eigenvalues": [a1, a2, a3]}, optional "rotation".
void load_curvature(const std::string& source, experiments::SweepConfig& cfg) {
  const json j = read_json(source);
  try {
    if (j.contains("eigenvalues")) {
      const auto a = j.at("eigenvalues").get<std::vector<double>>();
      if (a.size() != 3) throw UsageError("eigenvalues must have three entries");
      cfg.curv = ambient::Curvature::from_eigenvalues(Vec3d(a[0], a[1], a[2]));
    } else if (j.contains("ric")) {
      const Mat3d ric = matrix3(j.at("ric"), "ric");
      cfg.curv = j.contains("sc") ? ambient::Curvature::from_ricci(j.at("sc").get<double>(), ric)
                                  : ambient::Curvature::from_ricci(ric);
    } else {
      throw UsageError("curvature JSON needs \"eigenvalues\" or \"ric\"");
    }
    if (j.contains("rotation")) cfg.R = matrix3(j.at("rotation"), "rotation");
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed curvature: ") + e.what());
  }
}

surface::Resolution parse_grid(const std::string& s) {
  int n = 0, m = 0;
  char x = 0, extra = 0;
  if (std::sscanf(s.c_str(), "%d%c%d%c", &n, &x, &m, &extra) != 3 || (x != 'x' && x != 'X'))
    throw UsageError("grid must look like NxM");
  return {n, m};
}

// One value fixes the point of a single-point experiment; several replace the sweep grid.
void apply_list(const std::vector<double>& v, std::vector<double>& grid, double& fixed) {
  if (v.size() == 1) fixed = v[0];
  else if (!v.empty()) grid = v;
}

experiments::SweepConfig sweep_config(const Options& o) {
  experiments::SweepConfig cfg;
  apply_list(o.eps, cfg.eps, cfg.eps_fixed);
  apply_list(o.eta, cfg.eta, cfg.eta_fixed);
  if (o.eta.size() > 1) cfg.eta_psi = o.eta;
  apply_list(o.delta, cfg.delta, cfg.delta_fixed);
  if (o.r.size() == 1) cfg.r_el = o.r[0];
  if (o.r.size() > 1) cfg.r = cfg.moebius_r = o.r;
  if (!o.curvature.empty()) load_curvature(o.curvature, cfg);
  if (!o.grid.empty()) cfg.grid = parse_grid(o.grid);
  cfg.density = o.density;
  cfg.validate();
  return cfg;
}

experiments::MorseConfig morse_config(const Options& o) {
  experiments::MorseConfig cfg;
  cfg.seed = o.seed;
  if (!o.alphas.empty()) {
    if (o.alphas.size() % 3) throw UsageError("--alphas takes triples a,b,c");
    for (std::size_t k = 0; k < o.alphas.size(); k += 3)
      cfg.alphas.emplace_back(o.alphas[k], o.alphas[k + 1], o.alphas[k + 2]);
  }
  return cfg;
}

std::string resolution_tag(const Options& o) {
  std::ostringstream os;
  os << (o.grid.empty() ? "density=" : "grid=" + o.grid + ",density=") << o.density;
  return os.str();
}

void print_report(const ExpansionReport& rep) {
  std::printf("%s: %s\n", rep.name.c_str(), rep.pass() ? "PASS" : "FAIL");
  for (const auto& c : rep.checks)
    std::printf("  [%s] %s = %.6g (%s)\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.value, c.criterion.c_str());
  for (const auto& f : rep.fits)
    std::printf("  fit %s: order %.4f (rms %.2g, %d points)\n", f.name.c_str(), f.order, f.residual, f.points);
  for (const auto& w : rep.warnings) std::printf("  warning: %s\n", w.c_str());
}

int summarize(const std::vector<ExpansionReport>& reports) {
  std::vector<std::string> failed;
  for (const auto& rep : reports)
    for (const auto& c : rep.checks)
      if (!c.pass) failed.push_back(rep.name + "/" + c.name);
  if (failed.empty()) return 0;
  std::printf("failed checks (%zu):\n", failed.size());
  for (const auto& f : failed) std::printf("  %s\n", f.c_str());
  return exit_fail;
}

int emit(const Options& o, const std::string& command, const json& config, const std::vector<ExpansionReport>& reports) {
  const io::RunInfo info{command, config, o.seed, resolution_tag(o)};
  for (const auto& rep : reports) {
    print_report(rep);
    io::write_report(o.out, rep, info);
  }
  return summarize(reports);
}

int run_willmore(const Options& o) {
  auto cfg = sweep_config(o);
  const std::string preset = o.preset.empty() ? "clifford" : o.preset;
  if (preset != "clifford" && preset != "moebius") throw UsageError("willmore presets: clifford, moebius");
  const double eps = o.eps.empty() ? 0.0 : o.eps.front();
  const double target = constants::clifford_willmore;
  std::vector<ExpansionReport> reports;
  if (eps == 0) {
    reports.push_back(preset == "clifford" ? experiments::clifford_check(cfg) : experiments::moebius_invariance_check(cfg));
    for (const auto& row : reports.back().rows)
      if (row.series.ends_with("_W"))
        std::printf("W = %.12f  target 8 pi^2 = %.12f  (r = %g)\n", row.measured, target, row.r);
  } else {
    ExpansionReport rep("willmore");
    const std::vector<double> radii = preset == "clifford" ? std::vector<double>{0.0} : (o.r.empty() ? cfg.moebius_r : o.r);
    const double F = ambient::f_function(cfg.curv, cfg.R);
    for (double r : radii) {
      const auto p = experiments::willmore_point(eps, r, cfg.curv, cfg.R, r == 0 ? experiments::clifford_resolution(cfg, 256)
                                                                                 : cfg.grid, cfg.density);
      const double pred = target - 8 * constants::sqrt2 * constants::pi * constants::pi / 3 * eps * eps *
                                       (cfg.curv.sc + morse::g_r_coefficient * (1 - r) * (1 - r) * F);
      auto row = experiments::make_row("W", p.W, pred);
      row.eps = eps;
      row.r = r;
      rep.rows.push_back(row);
      std::printf("W = %.12f  expansion %.12f  flat 8 pi^2 = %.12f  (eps = %g, r = %g, %dx%d)\n", p.W, pred, target, eps,
                  r, p.res.nu, p.res.nv);
    }
    reports.push_back(rep);
  }
  return emit(o, "willmore", io::config_json(cfg), reports);
}

int run_so3(const Options& o) {
  const auto cfg = morse_config(o);
  const auto rep = experiments::so3_check(cfg);
  for (const auto& row : rep.table.rows)
    std::printf("alpha = (%g, %g, %g): %d critical points; indices %d/%d/%d/%d\n", row[0], row[1], row[2], int(row[3]),
                int(row[4]), int(row[5]), int(row[6]), int(row[7]));
  json config = {{"alphas", o.alphas}, {"triples", cfg.triples}, {"n_seeds", cfg.n_seeds}, {"seed", cfg.seed}};
  return emit(o, "so3-critical", config, {rep});
}

int run_morse_counts(const Options& o) {
  morse::Counts4 betti{}, c{};
  bool have_betti = false, have_c = false;
  auto take4 = [](const std::vector<int>& v, const char* what) {
    if (v.size() != 4) throw UsageError(std::string(what) + " needs four entries");
    for (int x : v)
      if (x < 0) throw UsageError(std::string(what) + " entries must be non-negative");
    return morse::Counts4{v[0], v[1], v[2], v[3]};
  };
  if (!o.counts.empty()) {
    const json j = read_json(o.counts);
    try {
      if (j.contains("betti")) betti = take4(j.at("betti").get<std::vector<int>>(), "betti"), have_betti = true;
      if (j.contains("sc_morse_counts"))
        c = take4(j.at("sc_morse_counts").get<std::vector<int>>(), "sc_morse_counts"), have_c = true;
    } catch (const json::exception& e) {
      throw UsageError(std::string("malformed counts: ") + e.what());
    }
  }
  if (!o.preset.empty()) {
    try {
      betti = morse::betti_preset(o.preset);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    have_betti = true;
  }
  if (!o.betti.empty()) betti = take4(o.betti, "--betti"), have_betti = true;
  if (!o.sc_counts.empty()) c = take4(o.sc_counts, "--sc-counts"), have_c = true;
  if (!have_betti || !have_c) throw UsageError("morse-counts needs Betti numbers (--preset/--betti) and --sc-counts");

  const auto tb = morse::tilde_beta(betti);
  const auto ct = morse::tilde_c(c);
  const auto m = morse::multiplicity_bound(tb.beta, ct);
  json out = {{"betti", betti},  {"sc_morse_counts", c},      {"tilde_beta", tb.beta},
              {"tilde_c", ct},   {"surplus", m.surplus},      {"bound", m.bound},
              {"build", io::build_tag()}, {"seed", o.seed}, {"warnings", tb.warnings}};
  std::cout << out.dump(2) << "\n";
  std::printf("bound %d\n", m.bound);

  ExpansionReport rep("morse-counts");
  rep.table.columns = {"q", "tilde_beta", "tilde_c", "surplus"};
  rep.table.units = {"1", "1", "1", "1"};
  for (int q = 0; q < 7; ++q)
    rep.table.rows.push_back({double(q), double(tb.beta[q]), double(ct[q]), q < 5 ? double(m.surplus[q]) : 0.0});
  rep.check("bound_at_least_two", m.bound, ">= 2", m.bound >= 2);
  rep.warnings = tb.warnings;
  std::filesystem::create_directories(o.out);
  io::write_csv(std::filesystem::path(o.out) / "morse-counts.csv", io::csv_table(rep), {"morse-counts", out, o.seed, ""});
  io::write_json(std::filesystem::path(o.out) / "morse-counts.json", out);
  return summarize({rep});
}

int run_all(const Options& o) {
  const auto cfg = sweep_config(o);
  const auto mcfg = morse_config(o);
  std::vector<ExpansionReport> reports;
  auto run = [&](auto&& f) {
    reports.push_back(f());
    std::fflush(stdout);
  };
  run([&] { return experiments::clifford_check(cfg); });
  run([&] { return experiments::moebius_invariance_check(cfg); });
  run([&] { return experiments::xi_sweep(cfg); });
  run([&] { return experiments::psi0_check(cfg); });
  run([&] { return experiments::appendix_check(cfg); });
  run([&] { return experiments::el_residual_sweep(cfg); });
  run([&] { return experiments::energy_expansion_check(cfg); });
  run([&] { return experiments::derivative_check(cfg); });
  run([&] { return experiments::handle_contribution_check(cfg); });
  run([&] { return experiments::so3_check(mcfg); });
  run([&] { return experiments::counting_check(mcfg); });
  json config = io::config_json(cfg);
  config["seed"] = mcfg.seed;
  return emit(o, "all", config, reports);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for degenerating Willmore tori in curved ambient metrics"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--eps", o.eps, "eps value, or a sweep grid a,b,c")->delimiter(',');
  app.add_option("--eta", o.eta, "eta value, or a sweep grid")->delimiter(',');
  app.add_option("--r", o.r, "radius |omega|, or a list of radii")->delimiter(',');
  app.add_option("--delta", o.delta, "cutoff radius, or a sweep grid")->delimiter(',');
  app.add_option("--alphas", o.alphas, "Ricci eigenvalue triples a,b,c[,a,b,c...]")->delimiter(',');
  app.add_option("--curvature", o.curvature, "curvature JSON file or inline JSON");
  app.add_option("--grid", o.grid, "node grid NxM for undeformed tori and spheres");
  app.add_option("--density", o.density, "node density multiplier for graded meshes");
  app.add_option("--out", o.out, "output directory")->capture_default_str();
  app.add_option("--seed", o.seed, "random seed")->capture_default_str();
  app.add_option("--preset", o.preset, "willmore: clifford|moebius; morse-counts: s3|s2xs1|t3");
  app.add_option("--sc-counts", o.sc_counts, "Morse counts C0,C1,C2,C3 of -Hess Sc")->delimiter(',');
  app.add_option("--betti", o.betti, "Z2 Betti numbers b0,b1,b2,b3")->delimiter(',');
  app.add_option("--counts", o.counts, "JSON {\"betti\": [...], \"sc_morse_counts\": [...]} file or inline");

  const auto cfg_of = [&] { return io::config_json(sweep_config(o)); };
  std::function<int()> action;
  auto sub = [&](const char* name, const char* help, std::function<int()> f) {
    app.add_subcommand(name, help)->callback([&action, f] { action = f; });
  };
  auto report = [&](const char* name, ExpansionReport (*f)(const experiments::SweepConfig&)) {
    return [&o, &cfg_of, name, f] { return emit(o, name, cfg_of(), {f(sweep_config(o))}); };
  };
  sub("verify-xi", "area-preserving offset xi_eta and its asymptotics", report("verify-xi", experiments::xi_sweep));
  sub("verify-psi0", "limit variation psi0 and the blow-up chart", report("verify-psi0", experiments::psi0_check));
  sub("willmore", "Willmore energy of a preset torus", [&] { return run_willmore(o); });
  sub("el-residual", "Euler-Lagrange residual scaling in eps", report("el-residual", experiments::el_residual_sweep));
  sub("energy-expansion", "degenerate-torus energy expansion",
      report("energy-expansion", experiments::energy_expansion_check));
  sub("derivative-check", "dW/dr by first variation and by finite differences",
      report("derivative-check", experiments::derivative_check));
  sub("handle-check", "handle-localized variation scaling",
      report("handle-check", experiments::handle_contribution_check));
  sub("appendix-integrals", "cutoff integrals on the limit sphere", report("appendix-integrals", experiments::appendix_check));
  sub("so3-critical", "critical points of F on SO(3)", [&] { return run_so3(o); });
  sub("morse-counts", "tilde-beta, tilde-C and the multiplicity bound", [&] { return run_morse_counts(o); });
  sub("all", "every check", [&] { return run_all(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_usage;
  }
  try {
    return action();
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "convergence failure: %s\n", e.what());
    return exit_convergence;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return exit_usage;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return exit_usage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_fail;
  }
}
