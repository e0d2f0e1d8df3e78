#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "ietx/experiment.hpp"

namespace ietx {

// Run metadata stamped into every output file.
struct RunMetadata {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  Backend backend = Backend::fixed;
  int precision_bits = 256;
  std::optional<std::string> timestamp;  // omitted for reproducible output

  nlohmann::json to_json() const;
};

RunMetadata metadata_for(const std::string& command, const ExperimentConfig& config);

// "# key: value" lines. The timestamp, when present, is the last one.
void write_comment_header(std::ostream& os, const RunMetadata& meta);

// Header lines, then alpha,N,Dstar,max_birkhoff_dev,spread,beta_hat,idoc,occupancy.
// Doubles use %.17g; a missing beta_hat is an empty field.
void write_sweep_csv(std::ostream& os, const RunMetadata& meta, const SweepReport& report);

nlohmann::json sweep_row_to_json(const SweepRow& row);
nlohmann::json sweep_report_to_json(const RunMetadata& meta, const ExperimentConfig& config,
                                     const SweepReport& report);

nlohmann::json diagnostic_to_json(const UeDiagnostic& diag);
nlohmann::json oracle_report_to_json(const OracleReport& report);

// Deterministic JSON text (sorted keys, 2-space indent, trailing newline).
std::string dump_json(const nlohmann::json& j);

std::string format_double(double v);

}  // namespace ietx
