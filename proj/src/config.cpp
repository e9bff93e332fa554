#include "mecbf/config.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace mecbf {
namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& p : v) s += (s.empty() ? "" : "; ") + p;
  return s;
}

std::string schedule_name(ScheduleKind k) {
  return k == ScheduleKind::kPolynomial ? "polynomial" : "geometric";
}

struct Field {
  std::string key;
  std::function<void(ScenarioConfig&, const std::string&)> set;  // throws on bad text
  std::function<std::string(const ScenarioConfig&)> get;
};

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("not a number");
  return v;
}

long long to_integer(const std::string& s) {
  std::size_t used = 0;
  const long long v = std::stoll(s, &used);
  if (used != s.size()) throw std::invalid_argument("not an integer");
  return v;
}

template <class Ref>
Field real(std::string key, Ref ref) {
  return {std::move(key), [ref](ScenarioConfig& c, const std::string& s) { ref(c) = to_double(s); },
          [ref](const ScenarioConfig& c) { return fmt_double(ref(c)); }};
}

template <class Ref>
Field integer(std::string key, Ref ref) {
  return {std::move(key),
          [ref](ScenarioConfig& c, const std::string& s) {
            const long long v = to_integer(s);
            if (v < -(1LL << 31) || v > (1LL << 31) - 1) throw std::out_of_range("integer too large");
            ref(c) = static_cast<int>(v);
          },
          [ref](const ScenarioConfig& c) { return std::to_string(ref(c)); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(integer("scenario.n_bs_antennas", [](auto& c) -> auto& { return c.dims.n_bs; }));
    f.push_back(integer("scenario.n_a_antennas", [](auto& c) -> auto& { return c.dims.n_a; }));
    f.push_back(integer("scenario.n_b_antennas", [](auto& c) -> auto& { return c.dims.n_b; }));
    f.push_back(integer("scenario.n_rf_bs", [](auto& c) -> auto& { return c.dims.n_rf; }));
    f.push_back(integer("scenario.n_rf_a", [](auto& c) -> auto& { return c.dims.n_rfa; }));
    f.push_back(integer("scenario.n_rf_b", [](auto& c) -> auto& { return c.dims.n_rfb; }));
    f.push_back(real("scenario.d_x", [](auto& c) -> auto& { return c.geometry.user_a[0]; }));
    f.push_back(real("scenario.d_y", [](auto& c) -> auto& { return c.geometry.user_a[1]; }));
    f.push_back(real("scenario.bs_height", [](auto& c) -> auto& { return c.geometry.bs[2]; }));
    f.push_back(real("scenario.user_height", [](auto& c) -> auto& { return c.geometry.user_a[2]; }));
    f.push_back(real("scenario.beta_up", [](auto& c) -> auto& { return c.geometry.beta_up; }));
    f.push_back(real("scenario.beta_down", [](auto& c) -> auto& { return c.geometry.beta_down; }));
    f.push_back(real("scenario.beta_d2d", [](auto& c) -> auto& { return c.geometry.beta_d2d; }));
    f.push_back(real("scenario.c0_db", [](auto& c) -> auto& { return c.geometry.c0_db; }));
    f.push_back(real("scenario.d0", [](auto& c) -> auto& { return c.geometry.d0; }));
    f.push_back(real("scenario.p_max_w", [](auto& c) -> auto& { return c.pa.p_max; }));
    f.push_back(real("scenario.p_ua_w", [](auto& c) -> auto& { return c.p_ua; }));
    f.push_back(real("scenario.p_bs_w", [](auto& c) -> auto& { return c.p_bs; }));
    f.push_back(real("scenario.bandwidth_up_hz", [](auto& c) -> auto& { return c.uplink.bandwidth_hz; }));
    f.push_back(real("scenario.bandwidth_down_hz", [](auto& c) -> auto& { return c.downlink.bandwidth_hz; }));
    f.push_back(real("scenario.bandwidth_d2d_hz", [](auto& c) -> auto& { return c.d2d.bandwidth_hz; }));
    f.push_back(real("scenario.noise_up_w", [](auto& c) -> auto& { return c.uplink.noise_w; }));
    f.push_back(real("scenario.noise_down_w", [](auto& c) -> auto& { return c.downlink.noise_w; }));
    f.push_back(real("scenario.noise_d2d_w", [](auto& c) -> auto& { return c.d2d.noise_w; }));
    f.push_back(real("scenario.task_bits", [](auto& c) -> auto& { return c.compute.task_bits; }));
    f.push_back(real("scenario.compression", [](auto& c) -> auto& { return c.compute.compression; }));
    f.push_back(real("scenario.local_bps", [](auto& c) -> auto& { return c.compute.local_bps; }));
    f.push_back(real("scenario.edge_bps", [](auto& c) -> auto& { return c.compute.edge_bps; }));
    f.push_back(integer("scenario.num_paths", [](auto& c) -> auto& { return c.num_paths; }));
    f.push_back(real("scenario.los_variance", [](auto& c) -> auto& { return c.los_variance; }));
    f.push_back(real("scenario.nlos_variance", [](auto& c) -> auto& { return c.nlos_variance; }));
    f.push_back(real("scenario.doppler_hz", [](auto& c) -> auto& { return c.doppler_hz; }));
    f.push_back(real("sim.tau_csi_s", [](auto& c) -> auto& { return c.tau_csi; }));
    f.push_back(real("sim.slot_s", [](auto& c) -> auto& { return c.slot_s; }));
    f.push_back(integer("sim.frames", [](auto& c) -> auto& { return c.frames; }));
    f.push_back(integer("sim.slots", [](auto& c) -> auto& { return c.slots; }));
    f.push_back(integer("sim.superframes", [](auto& c) -> auto& { return c.superframes; }));
    f.push_back(integer("sim.csi_bits", [](auto& c) -> auto& { return c.csi_bits; }));
    f.push_back(integer("sim.phase_bits", [](auto& c) -> auto& { return c.phase_bits; }));
    f.push_back({"sim.algorithm",
                 [](ScenarioConfig& c, const std::string& s) { c.algorithm = parse_algorithm(s); },
                 [](const ScenarioConfig& c) { return to_string(c.algorithm); }});
    f.push_back(integer("sim.trials", [](auto& c) -> auto& { return c.trials; }));
    f.push_back({"sim.seed",
                 [](ScenarioConfig& c, const std::string& s) {
                   if (s.empty() || s[0] == '-') throw std::invalid_argument("seed must be unsigned");
                   std::size_t used = 0;
                   c.seed = std::stoull(s, &used);
                   if (used != s.size()) throw std::invalid_argument("not an integer");
                 },
                 [](const ScenarioConfig& c) { return std::to_string(c.seed); }});
    f.push_back(real("sim.max_failure_rate", [](auto& c) -> auto& { return c.max_failure_rate; }));
    f.push_back(integer("sim.ideal_csi_iterations", [](auto& c) -> auto& { return c.ideal_csi_iterations; }));
    f.push_back(real("ssca.varpi", [](auto& c) -> auto& { return c.varpi; }));
    f.push_back({"ssca.schedule",
                 [](ScenarioConfig& c, const std::string& s) {
                   if (s == "polynomial") {
                     c.schedule.kind = ScheduleKind::kPolynomial;
                   } else if (s == "geometric") {
                     c.schedule.kind = ScheduleKind::kGeometric;
                   } else {
                     throw std::invalid_argument("expected polynomial or geometric");
                   }
                 },
                 [](const ScenarioConfig& c) { return schedule_name(c.schedule.kind); }});
    f.push_back(real("ssca.eps_exponent", [](auto& c) -> auto& { return c.schedule.eps_exponent; }));
    f.push_back(real("ssca.gamma_exponent", [](auto& c) -> auto& { return c.schedule.gamma_exponent; }));
    f.push_back(real("ssca.eps_base", [](auto& c) -> auto& { return c.schedule.eps_base; }));
    f.push_back(real("ssca.gamma_base", [](auto& c) -> auto& { return c.schedule.gamma_base; }));
    f.push_back(real("pcccp.varrho0", [](auto& c) -> auto& { return c.pcccp.varrho0; }));
    f.push_back(real("pcccp.c", [](auto& c) -> auto& { return c.pcccp.c; }));
    f.push_back(real("pcccp.delta1", [](auto& c) -> auto& { return c.pcccp.delta1; }));
    f.push_back(real("pcccp.delta2", [](auto& c) -> auto& { return c.pcccp.delta2; }));
    f.push_back(integer("pcccp.max_inner", [](auto& c) -> auto& { return c.pcccp.max_inner; }));
    f.push_back(integer("pcccp.max_outer", [](auto& c) -> auto& { return c.pcccp.max_outer; }));
    return f;
  }();
  return table;
}

void flatten(const YAML::Node& node, const std::string& prefix,
             std::vector<std::pair<std::string, YAML::Node>>& out,
             std::vector<std::string>& problems) {
  for (const auto& kv : node) {
    const std::string key = prefix.empty() ? kv.first.as<std::string>()
                                           : prefix + "." + kv.first.as<std::string>();
    if (kv.second.IsMap()) {
      flatten(kv.second, key, out, problems);
    } else if (kv.second.IsScalar()) {
      out.emplace_back(key, kv.second);
    } else {
      problems.push_back(key + ": expected a scalar value");
    }
  }
}

// Full key for `key`, resolving unambiguous bare leaf names.
std::string resolve(const std::string& key) {
  std::string hit;
  int matches = 0;
  for (const Field& f : fields()) {
    if (f.key == key) return key;
    const auto dot = f.key.rfind('.');
    if (key.find('.') == std::string::npos && f.key.substr(dot + 1) == key) {
      hit = f.key;
      ++matches;
    }
  }
  return matches == 1 ? hit : std::string();
}

// Keeps the mirrored user B position and the stream counts consistent with
// the independently settable fields.
void finish(ScenarioConfig& c) {
  LinkGeometry& g = c.geometry;
  g.user_b = {-g.user_a[0], g.user_a[1], g.user_a[2]};
  const SystemDims& d = c.dims;
  c.dims = SystemDims::with_streams(d.n_bs, d.n_a, d.n_b, d.n_rf, d.n_rfa, d.n_rfb);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid configuration: " + join(problems)),
      problems_(std::move(problems)) {}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const Field& f : fields()) keys.push_back(f.key);
  return keys;
}

ScenarioConfig parse_config_text(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError({std::string("malformed config: ") + e.what()});
  }
  ScenarioConfig cfg;
  std::vector<std::string> problems;
  if (root.IsNull()) {
    finish(cfg);
    return cfg;
  }
  if (!root.IsMap()) throw ConfigError({"config must be a key: value mapping"});

  std::vector<std::pair<std::string, YAML::Node>> entries;
  flatten(root, "", entries, problems);
  std::map<std::string, std::string> seen;
  for (const auto& [raw_key, node] : entries) {
    const std::string key = resolve(raw_key);
    if (key.empty()) {
      problems.push_back("unknown key '" + raw_key + "'");
      continue;
    }
    if (seen.count(key)) {
      problems.push_back("duplicate key '" + key + "'");
      continue;
    }
    seen[key] = raw_key;
    for (const Field& f : fields()) {
      if (f.key != key) continue;
      try {
        f.set(cfg, node.Scalar());
      } catch (const std::exception&) {
        problems.push_back(key + ": cannot use value '" + node.Scalar() + "'");
      }
    }
  }
  if (!problems.empty()) throw ConfigError(problems);
  finish(cfg);
  const auto violations = cfg.violations();
  if (!violations.empty()) throw ConfigError(violations);
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const ScenarioConfig& config) {
  std::string out;
  for (const Field& f : fields()) out += f.key + ": " + f.get(config) + "\n";
  return out;
}

bool same_config(const ScenarioConfig& a, const ScenarioConfig& b) {
  return serialize_config(a) == serialize_config(b) && a.dims == b.dims &&
         a.geometry.user_b == b.geometry.user_b && a.geometry.bs == b.geometry.bs;
}

std::string config_digest(const ScenarioConfig& config) {
  const std::string text = serialize_config(config);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

const char* const kArtifactVersion = "0.1.0";

RunManifest make_manifest(const ScenarioConfig& config, const std::string& command) {
  RunManifest m;
  m.config_digest = config_digest(config);
  m.artifact_version = kArtifactVersion;
  m.command = command;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  m.started_utc = buf;
  return m;
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::json j;
  j["config_digest"] = m.config_digest;
  j["artifact_version"] = m.artifact_version;
  j["started_utc"] = m.started_utc;
  j["command"] = m.command;
  j["outputs"] = m.outputs;
  return j.dump(2) + "\n";
}

}  // namespace mecbf
