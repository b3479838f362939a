#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nullcone/fit.hpp"

namespace nullcone::manifest {

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

/// SHA-1 of "blob <size>\0" + content, as git computes object ids.
std::string git_blob_id(std::string_view content);

std::string utc_timestamp();

/// Record of one CLI invocation. Timestamps live only here so the reports
/// themselves stay byte-identical across reruns.
struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string content_id;
  std::string started;
  std::string finished;
  std::vector<std::string> outputs;
  std::map<std::string, bool> criteria;
  int exit_code = 0;

  nlohmann::json to_json() const;
};

/// Writes `doc` with sorted keys and two-space indentation, newline terminated.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// RFC 4180 CSV with header t,quantity,value; one row per sample.
void write_series_csv(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, fit::Series>>& series);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace nullcone::manifest
