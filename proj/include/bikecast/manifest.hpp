#ifndef BIKECAST_MANIFEST_HPP
#define BIKECAST_MANIFEST_HPP

#include <cstdint>
#include <map>
#include <string>

namespace bikecast {

// FNV-1a 64 over the file bytes, as a 16-digit hex string. Fast,
// dependency-free, and plenty for provenance bookkeeping (these are not
// security hashes).
std::string file_checksum(const std::string& path);

struct RunManifest {
  std::string stage;
  std::string started_utc; // the one field exempt from byte-identity
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> input_checksums;
  std::map<std::string, std::string> output_checksums;
  std::map<std::string, std::int64_t> counts; // per-stage row counts
  int version = 1;
};

void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest read_manifest(const std::string& path);

} // namespace bikecast

#endif
