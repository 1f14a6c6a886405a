#include "cli/config.hpp"

#include <sketchfem/error.hpp>
#include <sketchfem/sketch.hpp>

#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <vector>

namespace sketchfem::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ParseError("config key '" + key + "': invalid number '" + value + "'");
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<double>(key, trim(item)));
  if (out.empty()) throw ParseError("config key '" + key + "': empty list");
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  const std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

std::uint64_t RunConfig::sample_size(Index rank) const {
  if (c) return *c;
  return plan_sample_size(rank, *epsilon, beta);
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string content = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ParseError("config line " + std::to_string(line_no) + ": empty key or value");
    }
    if (!seen.insert(key).second) throw ParseError("config key '" + key + "' given twice");

    if (key == "mesh") cfg.mesh_path = resolve(base, value);
    else if (key == "bundle") cfg.bundle_path = resolve(base, value);
    else if (key == "output") cfg.output_csv_path = resolve(base, value);
    else if (key == "forcing") cfg.forcing = value;
    else if (key == "queries") cfg.queries = parse_number<std::uint64_t>(key, value);
    else if (key == "rho") cfg.rho = parse_number<Index>(key, value);
    else if (key == "c") cfg.c = parse_number<std::uint64_t>(key, value);
    else if (key == "epsilon") cfg.epsilon = parse_number<double>(key, value);
    else if (key == "beta") cfg.beta = parse_number<double>(key, value);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "threads") cfg.threads = parse_number<unsigned>(key, value);
    else if (key == "field") cfg.field.kind = parse_field_kind(value);
    else if (key == "field.lo") cfg.field.lo = parse_number<double>(key, value);
    else if (key == "field.hi") cfg.field.hi = parse_number<double>(key, value);
    else if (key == "field.nu") cfg.field.nu = parse_number<double>(key, value);
    else if (key == "field.m_diag") cfg.field.m_diag = parse_list(key, value);
    else if (key == "field.variance") cfg.field.variance = parse_number<double>(key, value);
    else if (key == "field.kl_modes") cfg.field.kl_modes = parse_number<Index>(key, value);
    else if (key == "field.offset") cfg.field.offset = parse_number<double>(key, value);
    else if (key == "field.sign_weights") {
      const std::vector<double> w = parse_list(key, value);
      if (w.size() > 3) throw ValidationError("field.sign_weights takes at most 3 values");
      cfg.field.sign_weights = {0.0, 0.0, 0.0};
      std::copy(w.begin(), w.end(), cfg.field.sign_weights.begin());
    } else if (key == "field.noise") cfg.field.noise = parse_number<double>(key, value);
    else throw ParseError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }

  if (cfg.mesh_path.empty()) throw ValidationError("config is missing 'mesh'");
  if (cfg.bundle_path.empty()) throw ValidationError("config is missing 'bundle'");
  if (cfg.output_csv_path.empty()) throw ValidationError("config is missing 'output'");
  if (cfg.forcing != "ball" && cfg.forcing != "one") throw ValidationError("forcing must be 'ball' or 'one'");
  if (cfg.queries < 1) throw ValidationError("queries must be at least 1");
  if (cfg.rho && *cfg.rho < 1) throw ValidationError("rho must be at least 1");
  if (cfg.c && cfg.epsilon) throw ValidationError("give either 'c' or 'epsilon', not both");
  if (!cfg.c && !cfg.epsilon) throw ValidationError("config needs 'c' or 'epsilon'");
  if (cfg.c && *cfg.c < 1) throw ValidationError("c must be positive");
  if (cfg.epsilon && !(*cfg.epsilon > 0.0 && *cfg.epsilon < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
  if (!(cfg.beta > 0.0 && cfg.beta <= 1.0)) throw ValidationError("beta must lie in (0, 1]");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path.string() + "'");
  RunConfig cfg = parse_config(in, path.parent_path());
  for (const auto& [what, p] : {std::pair{"mesh", cfg.mesh_path}, std::pair{"bundle", cfg.bundle_path}}) {
    if (!std::filesystem::is_regular_file(p)) {
      throw ValidationError(std::string(what) + " file '" + p.string() + "' does not exist");
    }
  }
  return cfg;
}

}  // namespace sketchfem::cli
