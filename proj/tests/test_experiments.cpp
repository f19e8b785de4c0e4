#include "wlab/experiments.hpp"
#include "wlab/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace wlab;
using namespace wlab::experiments;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) out.push_back(item);
  return out;
}

// key=value fields of the CSV header up to config=, which runs to the end of the line.
std::map<std::string, std::string> header_fields(const std::string& line) {
  std::map<std::string, std::string> f;
  const auto cfg = line.find(" config=");
  f["config"] = line.substr(cfg + 8);
  for (const auto& tok : split(line.substr(2, cfg - 2), ' ')) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos && tok.substr(0, eq) != "command") f[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return f;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("configuration windows") {
  CHECK_NOTHROW(SweepConfig{}.validate());
  auto bad = [](auto edit) {
    SweepConfig c;
    edit(c);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  };
  bad([](SweepConfig& c) { c.eps = {0.02, 0.04, 0.6}; });
  bad([](SweepConfig& c) { c.eps = {0.02, 0.04}; });
  bad([](SweepConfig& c) { c.eta = {0.2, 0.1, 0.01}; });
  bad([](SweepConfig& c) { c.delta_fixed = 0.5; });
  bad([](SweepConfig& c) { c.r = {0.99}; });
  bad([](SweepConfig& c) { c.density = 0; });
  bad([](SweepConfig& c) { c.grid = surface::Resolution{63, 64}; });
  bad([](SweepConfig& c) { c.R = 2 * Mat3d::Identity(); });
  SweepConfig zero;
  zero.eps_fixed = 0;
  CHECK_NOTHROW(zero.validate());
}

TEST_CASE("report rows and checks") {
  const ReportRow r = make_row("s", 1.5, 1.25);
  CHECK(r.residual == 0.25);
  CHECK(std::isnan(r.eps));
  ExpansionReport rep("demo");
  CHECK(rep.pass());
  rep.check("a", 1.0, "< 2", true);
  CHECK(rep.pass());
  rep.check("b", 3.0, "< 2", false);
  CHECK(!rep.pass());
  REQUIRE(rep.find("b") != nullptr);
  CHECK(rep.find("b")->value == 3.0);
  CHECK(rep.find("c") == nullptr);
}

TEST_CASE("willmore_point on the flat Clifford torus") {
  const WillmorePoint p = willmore_point(0, 0, ambient::Curvature::flat(), Mat3d::Identity(), surface::Resolution{128, 128});
  CHECK(std::abs(p.W / constants::clifford_willmore - 1) < 1e-10);
  CHECK(std::abs(p.area / constants::clifford_area - 1) < 1e-10);
  // Flat energy is independent of the curvature argument.
  const WillmorePoint q = willmore_point(0, 0, ambient::Curvature::from_eigenvalues(Vec3d(1, 2, 3)), Mat3d::Identity(),
                                         surface::Resolution{128, 128});
  CHECK(q.W == p.W);
}

TEST_CASE("cheap reports pass") {
  const SweepConfig cfg;
  CHECK(clifford_check(cfg).pass());
  CHECK(appendix_check(cfg).pass());
  MorseConfig m;
  m.triples = 2;
  m.n_seeds = 200;
  m.counting_samples = 10;
  CHECK(counting_check(m).pass());
  CHECK(so3_check(m).pass());
}

TEST_CASE("CSV and JSON artifacts mirror each other") {
  const SweepConfig cfg;
  const ExpansionReport rep = appendix_check(cfg);
  const fs::path dir = fs::temp_directory_path() / "wlab_io_test";
  fs::remove_all(dir);
  io::RunInfo info{"appendix-integrals", io::config_json(cfg), 42, "auto"};
  io::write_report(dir, rep, info);

  std::ifstream csv(dir / (rep.name + ".csv"));
  std::string header;
  std::getline(csv, header);
  REQUIRE(header.rfind("# ", 0) == 0);
  const auto f = header_fields(header);
  CHECK(f.at("seed") == "42");
  CHECK(f.at("resolution") == "auto");
  CHECK(f.at("build") == io::build_tag());
  CHECK(nlohmann::json::parse(f.at("config")) == io::config_json(cfg));
  const auto columns = split(f.at("columns"), ',');
  CHECK(split(f.at("units"), ',').size() == columns.size());

  std::ifstream js(dir / (rep.name + ".json"));
  const nlohmann::json j = nlohmann::json::parse(js);
  CHECK(j.at("columns").get<std::vector<std::string>>() == columns);
  CHECK(j.at("seed") == 42);
  CHECK(j.at("pass") == rep.pass());
  CHECK(j.at("checks").size() == rep.checks.size());

  std::size_t k = 0;
  for (std::string line; std::getline(csv, line); ++k) {
    const auto cells = split(line, ',');
    REQUIRE(k < j.at("rows").size());
    const auto& row = j.at("rows")[k];
    REQUIRE(cells.size() == row.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (row[c].is_null()) CHECK(cells[c] == "nan");
      else if (row[c].is_number()) CHECK(std::stod(cells[c]) == row[c].get<double>());
      else CHECK(cells[c] == row[c].get<std::string>());
    }
  }
  CHECK(k == j.at("rows").size());
  CHECK(k == rep.table.rows.size());
  fs::remove_all(dir);
}

TEST_CASE("default report layout") {
  ExpansionReport rep("rows");
  ReportRow r = make_row("curve", 2.0, 1.0);
  r.eps = 0.02;
  rep.rows.push_back(r);
  const Table t = io::csv_table(rep);
  CHECK(t.columns.front() == "series");
  CHECK(t.columns.size() == t.units.size());
  REQUIRE(t.rows.size() == 1);
  CHECK(t.labels[0] == "curve");
  CHECK(t.rows[0][0] == 0.02);
  CHECK(t.rows[0].back() == 1.0);
  const nlohmann::json j = io::to_json(rep);
  CHECK(j["rows"][0][0] == "curve");
  CHECK(j["rows"][0][2].is_null());
}

}
