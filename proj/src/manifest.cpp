#include "bikecast/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "bikecast/error.hpp"

namespace bikecast {

std::string file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::io_error, "cannot read '" + path + "'");
  std::uint64_t hash = 1469598103934665603ull;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ull;
    }
  }
  char out[24];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(hash));
  return out;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  nlohmann::json j;
  j["stage"] = manifest.stage;
  j["started_utc"] = manifest.started_utc;
  j["config"] = manifest.config;
  j["inputs"] = manifest.input_checksums;
  j["outputs"] = manifest.output_checksums;
  j["counts"] = manifest.counts;
  j["version"] = manifest.version;
  std::ofstream out(path);
  if (!out) throw Error(errc::io_error, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::missing_upstream_artifact, "missing manifest '" + path + "'");
  nlohmann::json j = nlohmann::json::parse(in);
  RunManifest m;
  m.stage = j.at("stage").get<std::string>();
  m.started_utc = j.at("started_utc").get<std::string>();
  m.config = j.at("config").get<std::map<std::string, std::string>>();
  m.input_checksums = j.at("inputs").get<std::map<std::string, std::string>>();
  m.output_checksums = j.at("outputs").get<std::map<std::string, std::string>>();
  m.counts = j.at("counts").get<std::map<std::string, std::int64_t>>();
  m.version = j.at("version").get<int>();
  return m;
}

} // namespace bikecast
