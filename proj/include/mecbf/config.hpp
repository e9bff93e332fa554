// Flat key: value scenario files with dotted namespaces (scenario.*, sim.*,
// ssca.*, pcccp.*), canonical serialization and the run manifest.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mecbf/harness.hpp"

namespace mecbf {

/// Parse or validation failure; `problems` lists every offending key or
/// violated invariant.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Every recognized key in canonical order.
std::vector<std::string> config_keys();

/// Parses YAML text. Nested maps are flattened with dots; a bare leaf name is
/// accepted when it matches exactly one key. Omitted keys keep the defaults.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

/// Canonical text: every key in config_keys() order, doubles at 17
/// significant digits, so parse(serialize(c)) == c field by field.
std::string serialize_config(const ScenarioConfig& config);

bool same_config(const ScenarioConfig& a, const ScenarioConfig& b);

/// Lowercase hex SHA-256 of serialize_config(config).
std::string config_digest(const ScenarioConfig& config);

struct RunManifest {
  std::string config_digest;
  std::string artifact_version;
  std::string started_utc;  // ISO 8601
  std::string command;
  std::vector<std::string> outputs;
};

extern const char* const kArtifactVersion;

RunManifest make_manifest(const ScenarioConfig& config, const std::string& command);
std::string manifest_json(const RunManifest& manifest);

}  // namespace mecbf
