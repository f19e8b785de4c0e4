#pragma once

// End-to-end verification sweeps. Every operation returns a report carrying
// its sweep table, named pass/fail checks and fitted orders.

#include "wlab/ambient.hpp"
#include "wlab/surface.hpp"
#include "wlab/types.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace wlab::experiments {

inline constexpr double none = std::numeric_limits<double>::quiet_NaN();

struct Tolerances {
  double flat_willmore = 1e-10;
  double moebius_invariance = 1e-6;
  double xi_slope = 2.0, xi_slope_band = 0.3;
  double xi_c0_rel = 0.05;
  double psi0_mean = 1e-8;
  double psi0_forms = 1e-8;
  double z_order_min = 1.3;
  double appendix_rel = 0.01;
  double appendix_order_min = 1.7;
  double basic_integrals = 1e-10;
  double el_order_min = 1.9;
  double el_floor = 1e-6;
  double energy_order_min = 2.5;
  double r_coefficient_rel = 0.2;
  double flat_energy = 1e-6;
  double route_agreement = 0.01;
  double derivative_rel = 0.25;
  double flat_derivative = 1e-5;
  double handle_eps_rel = 0.3;
  double handle_delta_rel = 0.4;
  double handle_eta_rel = 0.4;
};

struct SweepConfig {
  std::vector<double> eps = {0.02, 0.04, 0.08};
  std::vector<double> r = {0.8, 0.9};
  std::vector<double> moebius_r = {0.3, 0.5, 0.9};
  std::vector<double> eta = {0.2, 0.1, 0.05, 0.025};
  std::vector<double> eta_psi = {0.1, 0.05, 0.025};
  double eta_c0 = 0.02;
  std::vector<double> delta = {0.2, 0.1, 0.05};

  double eps_fixed = 0.05;
  double eta_fixed = 0.1;
  double delta_fixed = 0.2;
  double r_el = 0.5;

  ambient::Curvature curv = ambient::Curvature::from_eigenvalues(Vec3d(1, 2, 3));
  Mat3d R = Mat3d::Identity();

  // Resolution schedule: node counts scale with density; grid overrides the
  // Clifford and round-sphere meshes.
  double density = 1.0;
  std::optional<surface::Resolution> grid;

  Tolerances tol;

  // Throws std::invalid_argument outside the operating windows.
  void validate() const;
};

// One sweep point; residual = measured - prediction.
struct ReportRow {
  std::string series;
  double eps = none, r = none, eta = none, delta = none;
  double measured = 0, prediction = 0, residual = 0;
};

ReportRow make_row(std::string series, double measured, double prediction);

struct Check {
  std::string name;
  double value = 0;
  std::string criterion;
  bool pass = false;
};

struct Fit {
  std::string name;
  double order = 0;
  double residual = 0;
  int points = 0;
};

// Sweep-specific CSV layout; empty for reports whose rows are ReportRows.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::string> units;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;  // optional leading text column, one per row
};

struct ExpansionReport {
  explicit ExpansionReport(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  std::vector<ReportRow> rows;
  Table table;
  std::vector<Check> checks;
  std::vector<Fit> fits;
  std::vector<std::string> warnings;

  bool pass() const;
  void check(std::string name, double value, std::string criterion, bool ok);
  const Check* find(const std::string& name) const;
};

// W and area of the Clifford torus (r = 0) or the Moebius torus of radius r,
// measured in the metric delta + eps^2 h.
struct WillmorePoint {
  double W = 0, area = 0;
  surface::Resolution res;
};
WillmorePoint willmore_point(double eps, double r, const ambient::Curvature& curv, const Mat3d& R,
                             std::optional<surface::Resolution> grid = {}, double density = 1.0);

surface::Resolution clifford_resolution(const SweepConfig& cfg, int base = 128);

// Flat Clifford torus on the 256^2 schedule, and flat Moebius tori for moebius_r.
ExpansionReport clifford_check(const SweepConfig& cfg);
ExpansionReport moebius_invariance_check(const SweepConfig& cfg);
ExpansionReport xi_sweep(const SweepConfig& cfg);
ExpansionReport psi0_check(const SweepConfig& cfg);
ExpansionReport appendix_check(const SweepConfig& cfg);
ExpansionReport el_residual_sweep(const SweepConfig& cfg);
ExpansionReport energy_expansion_check(const SweepConfig& cfg);
// Throws ConvergenceError when the two measurement routes disagree beyond tolerance.
ExpansionReport derivative_check(const SweepConfig& cfg);
ExpansionReport handle_contribution_check(const SweepConfig& cfg);

struct MorseConfig {
  std::vector<Vec3d> alphas;  // empty: `triples` random triples
  int triples = 20;
  int n_seeds = 500;
  int counting_samples = 100;
  std::uint64_t seed = 20240531;
};

ExpansionReport so3_check(const MorseConfig& cfg);
ExpansionReport counting_check(const MorseConfig& cfg);

}  // namespace wlab::experiments
