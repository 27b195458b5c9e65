#include "medfactor/counts_io.hpp"

#include "medfactor/manifest.hpp"

namespace medfactor {

nlohmann::json counts_to_json(const LocalLawCounts& c, const nlohmann::json& manifest_stub) {
  nlohmann::json j;
  j["schema_version"] = kCountsSchemaVersion;
  j["x"] = c.x;
  j["nu"] = to_string(c.nu);
  j["p_cut"] = c.p_cut;
  j["delta_beta"] = c.delta_beta;
  auto& exact = j["exact_counts"] = nlohmann::json::array();
  for (const auto& [p, cnt] : c.exact_counts) exact.push_back({p, cnt});
  j["bucket_counts"] = c.bucket_counts;
  j["total"] = c.total;
  j["manifest"] = manifest_stub;
  return j;
}

LocalLawCounts counts_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("schema_version") ||
      !j["schema_version"].is_number_integer())
    throw SchemaError("counts payload: missing schema_version");
  const int found = j["schema_version"].get<int>();
  if (found != kCountsSchemaVersion)
    throw SchemaError("counts schema version mismatch: expected " +
                      std::to_string(kCountsSchemaVersion) + ", found " +
                      std::to_string(found));
  try {
    LocalLawCounts c;
    c.x = j.at("x").get<std::uint64_t>();
    c.nu = nu_from_string(j.at("nu").get<std::string>());
    c.p_cut = j.at("p_cut").get<std::uint64_t>();
    c.delta_beta = j.at("delta_beta").get<double>();
    for (const auto& pair : j.at("exact_counts")) {
      c.exact_counts.emplace_back(pair.at(0).get<std::uint64_t>(),
                                  pair.at(1).get<std::uint64_t>());
    }
    c.bucket_counts = j.at("bucket_counts").get<std::vector<std::uint64_t>>();
    c.total = j.at("total").get<std::uint64_t>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed counts payload: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("malformed counts payload: ") + e.what());
  }
}

std::string serialize_counts(const LocalLawCounts& c, const nlohmann::json& manifest_stub) {
  return counts_to_json(c, manifest_stub).dump(2) + "\n";
}

LocalLawCounts read_counts_file(const std::string& path) {
  const std::string text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("counts file is not valid JSON: ") + e.what());
  }
  return counts_from_json(j);
}

std::string counts_csv(const LocalLawCounts& c) {
  std::string out = "p,count\n";
  for (const auto& [p, cnt] : c.exact_counts) {
    out += std::to_string(p);
    out += ',';
    out += std::to_string(cnt);
    out += '\n';
  }
  return out;
}

}  // namespace medfactor
