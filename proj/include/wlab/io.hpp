#pragma once

// CSV and JSON artifacts for sweep reports.

#include "wlab/experiments.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>

namespace wlab::io {

// Provenance written into every artifact.
struct RunInfo {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string resolution;
};

// git describe of the source tree at configure time.
std::string build_tag();

nlohmann::json to_json(const experiments::ExpansionReport& rep);
nlohmann::json config_json(const experiments::SweepConfig& cfg);

// Column names and rows of the report's CSV: the sweep table when present,
// otherwise series,eps,r,eta,delta,measured,prediction,residual.
experiments::Table csv_table(const experiments::ExpansionReport& rep);

// First line: "# columns=... units=... build=... seed=... resolution=... config=<json>".
void write_csv(const std::filesystem::path& path, const experiments::Table& t, const RunInfo& info);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// <dir>/<name>.csv and <dir>/<name>.json.
void write_report(const std::filesystem::path& dir, const experiments::ExpansionReport& rep, const RunInfo& info);

}  // namespace wlab::io
