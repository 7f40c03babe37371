#include "sklab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>

#include "sklab/csv.hpp"
#include "sklab/errors.hpp"
#include "sklab/manifest.hpp"

namespace sklab {
namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct RawConfig {
  std::string origin;
  std::map<std::string, Entry> entries;
  std::vector<std::string> sections;

  [[noreturn]] void fail(const std::string& field, int line, const std::string& message) const {
    throw config_error(field, origin + ":" + std::to_string(line) + ": " + field + ": " + message);
  }

  Entry* find(const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  std::string require_string(const std::string& key) {
    Entry* e = find(key);
    if (!e) throw config_error(key, origin + ": missing required key '" + key + "'");
    return e->value;
  }

  double parse_double(const std::string& key, const Entry& e) const {
    try {
      std::size_t pos = 0;
      const double v = std::stod(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      fail(key, e.line, "expected a number, got '" + e.value + "'");
    }
  }

  double require_double(const std::string& key) {
    Entry* e = find(key);
    if (!e) throw config_error(key, origin + ": missing required key '" + key + "'");
    return parse_double(key, *e);
  }

  std::optional<double> optional_double(const std::string& key) {
    Entry* e = find(key);
    if (!e) return std::nullopt;
    return parse_double(key, *e);
  }

  long require_integer(const std::string& key) {
    Entry* e = find(key);
    if (!e) throw config_error(key, origin + ": missing required key '" + key + "'");
    try {
      std::size_t pos = 0;
      const long v = std::stol(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      fail(key, e->line, "expected an integer, got '" + e->value + "'");
    }
  }

  std::uint64_t require_uint64(const std::string& key) {
    Entry* e = find(key);
    if (!e) throw config_error(key, origin + ": missing required key '" + key + "'");
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      fail(key, e->line, "expected an unsigned integer, got '" + e->value + "'");
    }
  }

  std::vector<double> optional_list(const std::string& key) {
    Entry* e = find(key);
    if (!e) return {};
    std::string text = e->value;
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream ss(text);
    std::vector<double> out;
    std::string token;
    while (ss >> token) {
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(token, &pos));
        if (pos != token.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        fail(key, e->line, "expected a list of numbers, got '" + e->value + "'");
      }
    }
    return out;
  }

  int line_of(const std::string& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second.line;
  }
};

std::string trim(const std::string& s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

RawConfig tokenize(const std::string& text, const std::string& origin) {
  RawConfig raw;
  raw.origin = origin;
  std::istringstream stream(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw config_error(origin + ":" + std::to_string(line_no) + ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw config_error(origin + ":" + std::to_string(line_no) + ": empty section name");
      }
      raw.sections.push_back(section);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    if (section.empty()) {
      throw config_error(origin + ":" + std::to_string(line_no) + ": key outside any [section]");
    }
    const std::string key = section + "." + trim(line.substr(0, eq));
    if (raw.entries.count(key)) {
      throw config_error(key, origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    raw.entries[key] = Entry{trim(line.substr(eq + 1)), line_no, false};
  }
  return raw;
}

[[noreturn]] void value_error(const RawConfig& raw, const std::string& field,
                              const std::string& message) {
  raw.fail(field, raw.line_of(field), message);
}

}  // namespace

CliConfig parse_config_text(const std::string& text, const std::string& origin) {
  RawConfig raw = tokenize(text, origin);
  CliConfig config;

  config.kernel.name = raw.require_string("kernel.name");
  config.kernel.params = raw.optional_list("kernel.params");
  config.kernel.kappa = raw.optional_double("kernel.kappa");
  if (config.kernel.kappa && !(*config.kernel.kappa >= 0.0)) {
    value_error(raw, "kernel.kappa", "must be >= 0");
  }

  config.beta = raw.optional_double("sim.beta");
  if (config.beta && !(*config.beta > 0.0)) value_error(raw, "sim.beta", "must be positive");
  config.beta_grid = raw.optional_list("sim.beta_grid");
  for (std::size_t i = 0; i < config.beta_grid.size(); ++i) {
    if (!(config.beta_grid[i] > 0.0)) value_error(raw, "sim.beta_grid", "entries must be positive");
    if (i > 0 && !(config.beta_grid[i] > config.beta_grid[i - 1])) {
      value_error(raw, "sim.beta_grid", "must be strictly increasing");
    }
  }
  if (!config.beta && config.beta_grid.empty()) {
    throw config_error("sim.beta", origin + ": one of sim.beta or sim.beta_grid is required");
  }

  config.horizon = raw.require_double("sim.T");
  if (!(config.horizon > 0.0)) value_error(raw, "sim.T", "must be positive");
  config.n_steps = static_cast<int>(raw.require_integer("sim.n_steps"));
  if (config.n_steps < 0) value_error(raw, "sim.n_steps", "must be >= 0");
  config.n_particles = static_cast<int>(raw.require_integer("sim.n_particles"));
  if (config.n_particles < 1) value_error(raw, "sim.n_particles", "must be >= 1");
  config.seed = raw.require_uint64("sim.seed");
  if (Entry* e = raw.find("sim.system")) {
    config.system = e->value;
    if (config.system != "second-order" && config.system != "limit") {
      value_error(raw, "sim.system", "must be 'second-order' or 'limit'");
    }
  }
  if (Entry* e = raw.find("sim.n_steps_policy")) {
    config.n_steps_policy = e->value;
    if (config.n_steps_policy != "fixed" && config.n_steps_policy != "scale-with-beta") {
      value_error(raw, "sim.n_steps_policy", "must be 'fixed' or 'scale-with-beta'");
    }
  }

  if (Entry* e = raw.find("init.kind")) {
    if (e->value == "deterministic-point") {
      config.init.kind = InitialLaw::Kind::kDeterministicPoint;
    } else if (e->value == "gaussian") {
      config.init.kind = InitialLaw::Kind::kGaussian;
    } else {
      value_error(raw, "init.kind", "must be 'deterministic-point' or 'gaussian'");
    }
  }
  if (auto v = raw.optional_double("init.mean_x")) config.init.mean_x = *v;
  if (auto v = raw.optional_double("init.mean_v")) config.init.mean_v = *v;
  if (auto v = raw.optional_double("init.var_x")) config.init.var_x = *v;
  if (auto v = raw.optional_double("init.var_v")) config.init.var_v = *v;
  if (auto v = raw.optional_double("init.M")) config.init.second_moment_bound = *v;
  try {
    config.init.validate();
  } catch (const parameter_error& e) {
    throw config_error("init", origin + ": " + e.what());
  }

  config.output_dir = raw.require_string("output.dir");
  if (config.output_dir.empty()) value_error(raw, "output.dir", "must not be empty");

  const bool has_scaling =
      std::find(raw.sections.begin(), raw.sections.end(), "scaling") != raw.sections.end();
  if (has_scaling) {
    ScalingConfig scaling;
    scaling.gamma = raw.require_double("scaling.gamma");
    if (!(scaling.gamma > 0.0)) value_error(raw, "scaling.gamma", "must be positive");
    scaling.beta = raw.optional_double("scaling.beta");
    if (scaling.beta && !(*scaling.beta > 0.0)) value_error(raw, "scaling.beta", "must be positive");
    scaling.checkpoints = raw.optional_list("scaling.checkpoints");
    if (scaling.checkpoints.empty()) {
      scaling.checkpoints = {0.25 * config.horizon, 0.5 * config.horizon, config.horizon};
    }
    for (double t : scaling.checkpoints) {
      if (!(t > 0.0) || t > config.horizon * (1.0 + 1e-12)) {
        value_error(raw, "scaling.checkpoints", "checkpoints must lie in (0, T]");
      }
    }
    config.scaling = scaling;
  }

  for (const auto& [key, entry] : raw.entries) {
    if (!entry.used) {
      raw.fail(key, entry.line, "unknown key");
    }
  }
  return config;
}

CliConfig parse_config_file(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception& e) {
    throw config_error(e.what());
  }
  return parse_config_text(text, path);
}

std::string render_config_ini(const CliConfig& config) {
  std::string out;
  out += "[kernel]\n";
  out += "name = " + config.kernel.name + "\n";
  if (!config.kernel.params.empty()) {
    out += "params =";
    for (double p : config.kernel.params) out += " " + format_double(p);
    out += "\n";
  }
  if (config.kernel.kappa) out += "kappa = " + format_double(*config.kernel.kappa) + "\n";

  out += "\n[sim]\n";
  if (config.beta) out += "beta = " + format_double(*config.beta) + "\n";
  if (!config.beta_grid.empty()) {
    out += "beta_grid =";
    for (double b : config.beta_grid) out += " " + format_double(b);
    out += "\n";
  }
  out += "T = " + format_double(config.horizon) + "\n";
  out += "n_steps = " + std::to_string(config.n_steps) + "\n";
  out += "n_particles = " + std::to_string(config.n_particles) + "\n";
  out += "seed = " + std::to_string(config.seed) + "\n";
  out += "system = " + config.system + "\n";
  out += "n_steps_policy = " + config.n_steps_policy + "\n";

  out += "\n[init]\n";
  out += std::string("kind = ") +
         (config.init.kind == InitialLaw::Kind::kGaussian ? "gaussian" : "deterministic-point") +
         "\n";
  out += "mean_x = " + format_double(config.init.mean_x) + "\n";
  out += "mean_v = " + format_double(config.init.mean_v) + "\n";
  out += "var_x = " + format_double(config.init.var_x) + "\n";
  out += "var_v = " + format_double(config.init.var_v) + "\n";
  out += "M = " + format_double(config.init.second_moment_bound) + "\n";

  out += "\n[output]\n";
  out += "dir = " + config.output_dir + "\n";

  if (config.scaling) {
    out += "\n[scaling]\n";
    out += "gamma = " + format_double(config.scaling->gamma) + "\n";
    if (config.scaling->beta) out += "beta = " + format_double(*config.scaling->beta) + "\n";
    out += "checkpoints =";
    for (double t : config.scaling->checkpoints) out += " " + format_double(t);
    out += "\n";
  }
  return out;
}

DriftKernel build_kernel(const KernelConfig& kernel) {
  try {
    return make_kernel(kernel.name, kernel.params, kernel.kappa);
  } catch (const parameter_error& e) {
    throw config_error("kernel", std::string("kernel: ") + e.what());
  }
}

SimConfig build_sim_config(const CliConfig& config) {
  if (!config.beta) {
    throw config_error("sim.beta", "this command needs a single sim.beta");
  }
  SimConfig sim;
  sim.beta = *config.beta;
  sim.kernel = build_kernel(config.kernel);
  sim.horizon = config.horizon;
  sim.n_steps = config.n_steps;
  sim.n_particles = config.n_particles;
  sim.init = config.init;
  sim.seed = config.seed;
  return sim;
}

}  // namespace sklab
