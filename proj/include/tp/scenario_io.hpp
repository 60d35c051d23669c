#pragma once

// Scenario JSON files and run manifests.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "tp/model.hpp"

namespace tp::io {

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadedScenario {
  Scenario scenario;
  std::string digest;  // 16 hex digits, see scenario_digest
  std::vector<std::string> warnings;
};

/// Strict schema: every key is required and unknown keys are rejected. Errors
/// are ValidationError with the JSON path of the offending field.
Scenario scenario_from_json(const nlohmann::json& document);

nlohmann::json scenario_to_json(const Scenario& scenario);

/// FNV-1a 64 over the compact dump of the document (keys sorted), so the
/// digest ignores whitespace and key order in the file.
std::string scenario_digest(const nlohmann::json& document);

/// Reads, parses and validates. IoError if unreadable; ValidationError for
/// malformed JSON or schema/invariant violations.
LoadedScenario load_scenario(const std::filesystem::path& path);

struct RunRecord {
  std::string timestamp;  // RFC 3339, UTC
  std::string command_line;
  std::string scenario_digest;
  std::vector<std::string> output_paths;
  int exit_code = 0;
};

std::string utc_timestamp_now();

/// Appends one JSON line to `manifest` (parent directories created).
void append_run_record(const std::filesystem::path& manifest, const RunRecord& record);

}  // namespace tp::io
