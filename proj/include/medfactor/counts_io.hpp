#ifndef MEDFACTOR_COUNTS_IO_HPP
#define MEDFACTOR_COUNTS_IO_HPP

#include <string>

#include <json.hpp>

#include "medfactor/local_law.hpp"

namespace medfactor {

// Counts-file JSON: {schema_version, x, nu, p_cut, delta_beta,
// exact_counts: [[p, count]...], bucket_counts, total, manifest}. The
// embedded manifest carries only the deterministic provenance (command,
// parameters, artifact version); timestamps and checksums live in the
// sidecar manifest so identical runs produce identical payload bytes.
nlohmann::json counts_to_json(const LocalLawCounts& c, const nlohmann::json& manifest_stub);

// Throws SchemaError on a version mismatch or malformed payload.
LocalLawCounts counts_from_json(const nlohmann::json& j);

std::string serialize_counts(const LocalLawCounts& c, const nlohmann::json& manifest_stub);
LocalLawCounts read_counts_file(const std::string& path);

// CSV of the exact (p, count) pairs.
std::string counts_csv(const LocalLawCounts& c);

}  // namespace medfactor

#endif
