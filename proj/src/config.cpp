#include "config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "errors.hpp"

namespace rist {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += fmt(v[i]);
  }
  return s;
}

std::string fmt_vec3(const Vec3& v) {
  return fmt(v.x) + "," + fmt(v.y) + "," + fmt(v.z);
}

// Typed setters keyed by config name; each returns an error string or "".
using Setter = std::function<std::string(ExperimentConfig&, const std::string&)>;

std::string parse_int(const std::string& v, int& out) {
  try {
    std::size_t pos = 0;
    const long val = std::stol(v, &pos);
    if (pos != v.size()) return "trailing characters";
    out = static_cast<int>(val);
    return "";
  } catch (const std::logic_error&) {
    return "not an integer";
  }
}

std::string parse_u64(const std::string& v, std::uint64_t& out) {
  try {
    std::size_t pos = 0;
    out = std::stoull(v, &pos);
    if (pos != v.size()) return "trailing characters";
    return "";
  } catch (const std::logic_error&) {
    return "not an unsigned integer";
  }
}

std::string parse_double(const std::string& v, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(v, &pos);
    if (pos != v.size()) return "trailing characters";
    return "";
  } catch (const std::logic_error&) {
    return "not a number";
  }
}

std::string parse_double_list(const std::string& v, std::vector<double>& out) {
  std::vector<double> vals;
  for (const auto& item : split_list(v)) {
    double d = 0.0;
    if (auto err = parse_double(item, d); !err.empty())
      return "'" + item + "' is " + err;
    vals.push_back(d);
  }
  if (vals.empty()) return "empty list";
  out = std::move(vals);
  return "";
}

std::string parse_vec3(const std::string& v, Vec3& out) {
  std::vector<double> vals;
  if (auto err = parse_double_list(v, vals); !err.empty()) return err;
  if (vals.size() != 3) return "expected 3 comma-separated components";
  out = {vals[0], vals[1], vals[2]};
  return "";
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"num_antennas",
       [](ExperimentConfig& c, const std::string& v) { return parse_int(v, c.num_antennas); }},
      {"num_ris_elements",
       [](ExperimentConfig& c, const std::string& v) { return parse_int(v, c.num_ris_elements); }},
      {"num_users",
       [](ExperimentConfig& c, const std::string& v) { return parse_int(v, c.num_users); }},
      {"zf_users",
       [](ExperimentConfig& c, const std::string& v) { return parse_int(v, c.zf_users); }},
      {"target_angles_deg",
       [](ExperimentConfig& c, const std::string& v) {
         return parse_double_list(v, c.target_angles_deg);
       }},
      {"target_distance_m",
       [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.target_distance_m); }},
      {"beta",
       [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.beta); }},
      {"beta_list",
       [](ExperimentConfig& c, const std::string& v) { return parse_double_list(v, c.beta_list); }},
      {"sep_beta_list",
       [](ExperimentConfig& c, const std::string& v) { return parse_double_list(v, c.sep_beta_list); }},
      {"psk_order",
       [](ExperimentConfig& c, const std::string& v) { return parse_int(v, c.psk_order); }},
      {"ris_bits_list",
       [](ExperimentConfig& c, const std::string& v) -> std::string {
         std::vector<PhaseResolution> bits;
         for (const auto& item : split_list(v)) {
           try {
             bits.push_back(PhaseResolution::parse(item));
           } catch (const Error& e) {
             return e.what();
           }
         }
         if (bits.empty()) return "empty list";
         c.ris_bits_list = std::move(bits);
         return "";
       }},
      {"total_power_db_list",
       [](ExperimentConfig& c, const std::string& v) {
         return parse_double_list(v, c.total_power_db_list);
       }},
      {"sep_operating_power_db",
       [](ExperimentConfig& c, const std::string& v) {
         return parse_double(v, c.sep_operating_power_db);
       }},
      {"noise_var",
       [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.noise_var); }},
      {"realizations",
       [](ExperimentConfig& c, const std::string& v) { return parse_int(v, c.realizations); }},
      {"symbols_per_realization",
       [](ExperimentConfig& c, const std::string& v) {
         return parse_int(v, c.symbols_per_realization);
       }},
      {"rician_k_db",
       [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.rician_k_db); }},
      {"master_seed",
       [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.master_seed); }},
      {"bs_position",
       [](ExperimentConfig& c, const std::string& v) { return parse_vec3(v, c.bs_position); }},
      {"ris_position",
       [](ExperimentConfig& c, const std::string& v) { return parse_vec3(v, c.ris_position); }},
      {"user_region_corner",
       [](ExperimentConfig& c, const std::string& v) { return parse_vec3(v, c.user_region_corner); }},
      {"user_region_size_x",
       [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.user_region_size_x); }},
      {"user_region_size_y",
       [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.user_region_size_y); }},
      {"schemes",
       [](ExperimentConfig& c, const std::string& v) -> std::string {
         auto items = split_list(v);
         if (items.empty()) return "empty list";
         c.schemes = std::move(items);
         return "";
       }},
  };
  return table;
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

std::vector<double> ExperimentConfig::target_angles_rad() const {
  std::vector<double> out(target_angles_deg.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = target_angles_deg[i] * kDegToRad;
  return out;
}

double ExperimentConfig::ris_angle_from_bs() const {
  return azimuth(bs_position, ris_position);
}

std::string ExperimentConfig::to_text() const {
  std::string bits;
  for (std::size_t i = 0; i < ris_bits_list.size(); ++i) {
    if (i) bits += ",";
    bits += ris_bits_list[i].to_string();
  }
  std::string scheme_list;
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    if (i) scheme_list += ",";
    scheme_list += schemes[i];
  }
  std::ostringstream os;
  os << "num_antennas = " << num_antennas << "\n"
     << "num_ris_elements = " << num_ris_elements << "\n"
     << "num_users = " << num_users << "\n"
     << "zf_users = " << zf_users << "\n"
     << "target_angles_deg = " << fmt_list(target_angles_deg) << "\n"
     << "target_distance_m = " << fmt(target_distance_m) << "\n"
     << "beta = " << fmt(beta) << "\n"
     << "beta_list = " << fmt_list(beta_list) << "\n"
     << "sep_beta_list = " << fmt_list(sep_beta_list) << "\n"
     << "psk_order = " << psk_order << "\n"
     << "ris_bits_list = " << bits << "\n"
     << "total_power_db_list = " << fmt_list(total_power_db_list) << "\n"
     << "sep_operating_power_db = " << fmt(sep_operating_power_db) << "\n"
     << "noise_var = " << fmt(noise_var) << "\n"
     << "realizations = " << realizations << "\n"
     << "symbols_per_realization = " << symbols_per_realization << "\n"
     << "rician_k_db = " << fmt(rician_k_db) << "\n"
     << "master_seed = " << master_seed << "\n"
     << "bs_position = " << fmt_vec3(bs_position) << "\n"
     << "ris_position = " << fmt_vec3(ris_position) << "\n"
     << "user_region_corner = " << fmt_vec3(user_region_corner) << "\n"
     << "user_region_size_x = " << fmt(user_region_size_x) << "\n"
     << "user_region_size_y = " << fmt(user_region_size_y) << "\n"
     << "schemes = " << scheme_list << "\n";
  return os.str();
}

std::string ExperimentConfig::digest() const {
  // FNV-1a 64
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char c : to_text()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

void ExperimentConfig::validate() const {
  std::vector<std::string> issues;
  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) issues.push_back(msg);
  };

  require(num_antennas >= 1, "num_antennas must be >= 1");
  require(num_ris_elements >= 1, "num_ris_elements must be >= 1");
  require(num_users >= 1, "num_users must be >= 1");
  require(zf_users >= 1 && zf_users <= num_antennas,
          "zf_users must be in [1, num_antennas]");
  require(!target_angles_deg.empty(), "target_angles_deg must be nonempty");
  for (const double a : target_angles_deg)
    require(a > -90.0 && a < 90.0,
            "target angle " + fmt(a) + " deg outside (-90, 90)");
  require(target_distance_m > 0.0, "target_distance_m must be > 0");
  require(beta > 0.0 && beta < 1.0,
          "beta must be in (0, 1), got " + fmt(beta));
  for (const double b : beta_list)
    require(b > 0.0 && b < 1.0, "beta_list entry " + fmt(b) + " outside (0, 1)");
  for (const double b : sep_beta_list)
    require(b > 0.0 && b < 1.0,
            "sep_beta_list entry " + fmt(b) + " outside (0, 1)");
  require(is_power_of_two(psk_order) && psk_order >= 2,
          "psk_order must be a power of two >= 2, got " + std::to_string(psk_order));
  for (const auto& b : ris_bits_list)
    require(b.is_infinite() || (b.bits >= 1 && b.bits <= 8),
            "ris_bits entry must be in {1..8, inf}");
  require(!total_power_db_list.empty(), "total_power_db_list must be nonempty");
  require(noise_var > 0.0, "noise_var must be > 0");
  require(realizations >= 1, "realizations must be >= 1");
  require(symbols_per_realization >= 1, "symbols_per_realization must be >= 1");
  require(user_region_size_x > 0.0, "user_region_size_x must be > 0");
  require(user_region_size_y > 0.0, "user_region_size_y must be > 0");
  for (const auto& s : schemes)
    require(s == "RIST" || s == "MRT" || s == "QMRT" || s == "ZF",
            "unknown scheme '" + s + "' (expected RIST, MRT, QMRT or ZF)");

  if (!issues.empty()) throw ConfigError(std::move(issues));
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::vector<std::string> issues;

  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      issues.push_back("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      continue;
    }
    if (const std::string err = it->second(cfg, value); !err.empty())
      issues.push_back("line " + std::to_string(lineno) + ": key '" + key + "': " + err);
  }

  // Constraint checks run even when parsing already failed, so a bad file
  // reports everything in one pass.
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    issues.insert(issues.end(), e.issues().begin(), e.issues().end());
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_config_override(ExperimentConfig& cfg, const std::string& key,
                           const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end())
    throw ConfigError({"unknown key '" + key + "'"});
  if (const std::string err = it->second(cfg, value); !err.empty())
    throw ConfigError({"key '" + key + "': " + err});
}

}  // namespace rist
