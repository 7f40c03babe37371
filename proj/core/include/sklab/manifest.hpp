#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sklab {

/// Reproducibility record written next to every output set. The embedded
/// config echo plus the seed and tool version are sufficient to reproduce the
/// CSV bodies bit-exactly (results do not depend on the worker count).
struct RunManifest {
  std::string command;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string config_ini;  // normalized config echo, reparseable
  std::string started_at;  // ISO-8601 UTC
  std::string finished_at;
  std::vector<std::string> outputs;  // every file written, relative to the output dir
};

std::string manifest_json(const RunManifest& manifest);

std::string utc_timestamp();

/// Overwrites path with body; throws std::runtime_error on I/O failure.
void write_text_file(const std::string& path, const std::string& body);
std::string read_text_file(const std::string& path);

}  // namespace sklab
