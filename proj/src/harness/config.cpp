#include <fstream>
#include <json.hpp>
#include <sstream>

#include "diamag/errors.hpp"
#include "diamag/harness.hpp"

namespace diamag::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) {
      if (!out.empty()) out += ',';
      out += json_scalar(e);
    }
    return out;
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return fmt17(v.get<double>());
  throw ValidationError("unsupported JSON config value");
}

double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "' expects a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "' expects an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("config key '" + key + "' expects a boolean, got '" + v + "'");
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (double d : v) out += (out.empty() ? "" : ",") + fmt17(d);
  return out;
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap m;
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(t);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("invalid JSON config: ") + e.what());
    }
    for (auto it = j.begin(); it != j.end(); ++it) m[it.key()] = json_scalar(it.value());
    return m;
  }
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(lineno) + " is not key=value");
    m[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return m;
}

ConfigMap load_config_file(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw ValidationError("cannot read config file " + file.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

std::string canonical_config(const ConfigMap& m) {
  std::string out;
  for (const auto& [k, v] : m) out += k + '=' + v + '\n';
  return out;
}

std::uint64_t config_hash(const ConfigMap& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_config(m)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  std::string cell;
  std::istringstream is(s);
  while (std::getline(is, cell, ',')) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '[') cell.erase(0, 1);
    if (!cell.empty() && cell.back() == ']') cell.pop_back();
    if (!cell.empty()) out.push_back(to_real("list", cell));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (double d : parse_real_list(s)) {
    if (d != static_cast<int>(d)) throw ValidationError("expected integer list entries");
    out.push_back(static_cast<int>(d));
  }
  return out;
}

StudyConfig study_config_from(const ConfigMap& m, StudyConfig c) {
  for (const auto& [k, v] : m) {
    if (k == "L_list") c.L_list = parse_real_list(v);
    else if (k == "spacing") c.spacing = to_real(k, v);
    else if (k == "longitudinal_modes") c.longitudinal_modes = static_cast<int>(to_int(k, v));
    else if (k == "beta") c.gas.beta = to_real(k, v);
    else if (k == "omega") c.gas.omega = to_real(k, v);
    else if (k == "z") c.gas.z = to_real(k, v);
    else if (k == "eps") c.gas.eps = static_cast<int>(to_int(k, v));
    else if (k == "orders") c.orders = parse_int_list(v);
    else if (k == "fd_step") c.fd_step = to_real(k, v);
    else if (k == "samples") c.quadrature.sample_count = to_int(k, v);
    else if (k == "seed") c.seed = static_cast<std::uint64_t>(to_int(k, v));
    else if (k == "workers") c.workers = static_cast<int>(to_int(k, v));
    else if (k == "timing") c.timing = to_bool(k, v);
    else if (k == "out") c.output = v;
    else if (k == "cache_dir") c.cache_dir = v;
    else throw ValidationError("unknown config key '" + k + "'");
  }
  c.quadrature.seed = c.seed;
  c.quadrature.worker_count = c.workers;
  return c;
}

ConfigMap to_config_map(const StudyConfig& c) {
  ConfigMap m;
  m["L_list"] = join(c.L_list);
  m["spacing"] = fmt17(c.spacing);
  m["longitudinal_modes"] = std::to_string(c.longitudinal_modes);
  m["beta"] = fmt17(c.gas.beta);
  m["omega"] = fmt17(c.gas.omega);
  m["z"] = fmt17(c.gas.z);
  m["eps"] = std::to_string(c.gas.eps);
  std::string orders;
  for (int n : c.orders) orders += (orders.empty() ? "" : ",") + std::to_string(n);
  m["orders"] = orders;
  m["fd_step"] = fmt17(c.fd_step);
  m["seed"] = std::to_string(c.seed);
  m["timing"] = c.timing ? "true" : "false";
  return m;
}

}  // namespace diamag::harness
