#include "wlab/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef WLAB_BUILD_TAG
#define WLAB_BUILD_TAG "unknown"
#endif

namespace wlab::io {

using experiments::ExpansionReport;
using experiments::Table;
using nlohmann::json;

namespace {

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

json maybe(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

json matrix(const Mat3d& m) {
  json a = json::array();
  for (int i = 0; i < 3; ++i) a.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return a;
}

}  // namespace

std::string build_tag() { return WLAB_BUILD_TAG; }

json to_json(const ExpansionReport& rep) {
  json j;
  j["name"] = rep.name;
  j["pass"] = rep.pass();
  j["checks"] = json::array();
  for (const auto& c : rep.checks)
    j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"criterion", c.criterion}, {"pass", c.pass}});
  j["fits"] = json::array();
  for (const auto& f : rep.fits)
    j["fits"].push_back({{"name", f.name}, {"order", f.order}, {"residual", f.residual}, {"points", f.points}});
  j["warnings"] = rep.warnings;
  const Table t = csv_table(rep);
  j["columns"] = t.columns;
  j["rows"] = json::array();
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    json row = json::array();
    if (!t.labels.empty()) row.push_back(t.labels[k]);
    for (double x : t.rows[k]) row.push_back(maybe(x));
    j["rows"].push_back(row);
  }
  return j;
}

json config_json(const experiments::SweepConfig& cfg) {
  json j;
  j["eps"] = cfg.eps;
  j["r"] = cfg.r;
  j["moebius_r"] = cfg.moebius_r;
  j["eta"] = cfg.eta;
  j["eta_psi"] = cfg.eta_psi;
  j["eta_c0"] = cfg.eta_c0;
  j["delta"] = cfg.delta;
  j["eps_fixed"] = cfg.eps_fixed;
  j["eta_fixed"] = cfg.eta_fixed;
  j["delta_fixed"] = cfg.delta_fixed;
  j["r_el"] = cfg.r_el;
  j["sc"] = cfg.curv.sc;
  j["ric"] = matrix(cfg.curv.ric);
  j["R"] = matrix(cfg.R);
  j["density"] = cfg.density;
  if (cfg.grid) j["grid"] = {cfg.grid->nu, cfg.grid->nv};
  const auto& t = cfg.tol;
  j["tolerances"] = {{"flat_willmore", t.flat_willmore},
                     {"moebius_invariance", t.moebius_invariance},
                     {"xi_slope", t.xi_slope},
                     {"xi_slope_band", t.xi_slope_band},
                     {"xi_c0_rel", t.xi_c0_rel},
                     {"psi0_mean", t.psi0_mean},
                     {"psi0_forms", t.psi0_forms},
                     {"z_order_min", t.z_order_min},
                     {"appendix_rel", t.appendix_rel},
                     {"appendix_order_min", t.appendix_order_min},
                     {"basic_integrals", t.basic_integrals},
                     {"el_order_min", t.el_order_min},
                     {"el_floor", t.el_floor},
                     {"energy_order_min", t.energy_order_min},
                     {"r_coefficient_rel", t.r_coefficient_rel},
                     {"flat_energy", t.flat_energy},
                     {"route_agreement", t.route_agreement},
                     {"derivative_rel", t.derivative_rel},
                     {"flat_derivative", t.flat_derivative},
                     {"handle_eps_rel", t.handle_eps_rel},
                     {"handle_delta_rel", t.handle_delta_rel},
                     {"handle_eta_rel", t.handle_eta_rel}};
  return j;
}

Table csv_table(const ExpansionReport& rep) {
  if (!rep.table.columns.empty()) return rep.table;
  Table t;
  t.columns = {"series", "eps", "r", "eta", "delta", "measured", "prediction", "residual"};
  t.units = {"text", "1", "1", "1", "1", "1", "1", "1"};
  for (const auto& r : rep.rows) {
    t.labels.push_back(r.series);
    t.rows.push_back({r.eps, r.r, r.eta, r.delta, r.measured, r.prediction, r.residual});
  }
  return t;
}

void write_csv(const std::filesystem::path& path, const Table& t, const RunInfo& info) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# columns=" << join(t.columns) << " units=" << join(t.units) << " build=" << build_tag()
      << " seed=" << info.seed << " resolution=" << (info.resolution.empty() ? "default" : info.resolution)
      << " command=" << info.command << " config=" << info.config.dump() << "\n";
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    if (!t.labels.empty()) out << t.labels[k] << ",";
    const auto& row = t.rows[k];
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << number(row[i]);
    out << "\n";
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

void write_report(const std::filesystem::path& dir, const ExpansionReport& rep, const RunInfo& info) {
  std::filesystem::create_directories(dir);
  write_csv(dir / (rep.name + ".csv"), csv_table(rep), info);
  json j = to_json(rep);
  j["build"] = build_tag();
  j["seed"] = info.seed;
  j["resolution"] = info.resolution.empty() ? "default" : info.resolution;
  j["command"] = info.command;
  j["config"] = info.config;
  write_json(dir / (rep.name + ".json"), j);
}

}  // namespace wlab::io
