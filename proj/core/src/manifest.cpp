#include "sklab/manifest.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sklab/version.hpp"

namespace sklab {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_json(const RunManifest& manifest) {
  nlohmann::json j;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["command"] = manifest.command;
  j["seed"] = manifest.seed;
  j["workers"] = manifest.workers;
  j["config_ini"] = manifest.config_ini;
  j["started_at"] = manifest.started_at;
  j["finished_at"] = manifest.finished_at;
  j["outputs"] = manifest.outputs;
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sklab
