#ifndef MEDFACTOR_MANIFEST_HPP
#define MEDFACTOR_MANIFEST_HPP

#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace medfactor {

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr int kCountsSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "0.1.0";

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Provenance record of one CLI run; written as a sidecar after the outputs
// so the checksums cover the exact bytes on disk.
struct RunManifest {
  int schema_version = kManifestSchemaVersion;
  std::string command;
  std::map<std::string, std::string> parameters;
  std::string started_at;
  std::string finished_at;
  std::string artifact_version = kArtifactVersion;
  std::map<std::string, std::string> input_checksums;   // path -> sha256 hex
  std::map<std::string, std::string> output_checksums;  // path -> sha256 hex
  double wall_seconds = 0;

  nlohmann::json to_json() const;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file_hex(const std::string& path);  // throws IoError

std::string now_iso8601_utc();

// Writes content to path via a temp file + rename; throws IoError.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);  // throws IoError

}  // namespace medfactor

#endif
