#include "nullcone/manifest.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace nullcone::manifest {

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string git_blob_id(std::string_view content) {
  std::string payload = "blob " + std::to_string(content.size());
  payload.push_back('\0');
  payload.append(content);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(payload.data(), payload.size(), md, &len, EVP_sha1(), nullptr) != 1) {
    throw std::runtime_error("SHA-1 digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json RunManifest::to_json() const {
  return nlohmann::json{{"command", command},   {"config_hash", config_hash}, {"content_id", content_id},
                        {"started", started},   {"finished", finished},       {"outputs", outputs},
                        {"criteria", criteria}, {"exit_code", exit_code}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_series_csv(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, fit::Series>>& series) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "t,quantity,value\r\n";
  for (const auto& [name, s] : series) {
    for (const auto& [t, v] : s) out << format_double(t) << ',' << name << ',' << format_double(v) << "\r\n";
  }
}

}  // namespace nullcone::manifest
