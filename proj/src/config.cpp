#include "config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"

namespace darwinnet {

using nlohmann::json;

namespace {

bool positive(double v) { return v > 0.0 && std::isfinite(v); }
bool unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw ConfigError(key, what);
}

double as_real(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

std::int64_t as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    throw ConfigError(key, "integer out of range");
  return v.get<std::int64_t>();
}

std::uint64_t as_uint(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  if (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)
    throw ConfigError(key, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

bool as_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
  return v.get<bool>();
}

using Setter = std::function<void(ScenarioConfig&, const json&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"sim.total_cycles", [](auto& c, auto& v, auto& k) { c.total_cycles = as_int(v, k); }},
      {"sim.seed", [](auto& c, auto& v, auto& k) { c.seed = as_uint(v, k); }},
      {"fault.mode",
       [](auto& c, auto& v, auto& k) {
         if (!v.is_string()) throw ConfigError(k, "expected \"stochastic\" or \"deterministic\"");
         try {
           c.mode = fault_mode_from_string(v.template get<std::string>());
         } catch (const DomainError& e) {
           throw ConfigError(k, e.what());
         }
       }},
      {"fault.alpha", [](auto& c, auto& v, auto& k) { c.base.alpha = as_real(v, k); }},
      {"fault.beta", [](auto& c, auto& v, auto& k) { c.base.beta = as_real(v, k); }},
      {"shock.enabled", [](auto& c, auto& v, auto& k) { c.shock_enabled = as_bool(v, k); }},
      {"shock.cycle", [](auto& c, auto& v, auto& k) { c.shock.shock_cycle = as_int(v, k); }},
      {"shock.alpha", [](auto& c, auto& v, auto& k) { c.shock.params.alpha = as_real(v, k); }},
      {"shock.beta", [](auto& c, auto& v, auto& k) { c.shock.params.beta = as_real(v, k); }},
      {"shock.invalidate_fraction",
       [](auto& c, auto& v, auto& k) { c.shock.invalidate_fraction = as_real(v, k); }},
      {"shock.new_contexts", [](auto& c, auto& v, auto& k) { c.shock_new_contexts = as_bool(v, k); }},
      {"synth.latency_min_ms", [](auto& c, auto& v, auto& k) { c.synth.slow_latency_min_ms = as_real(v, k); }},
      {"synth.latency_max_ms", [](auto& c, auto& v, auto& k) { c.synth.slow_latency_max_ms = as_real(v, k); }},
      {"synth.pool_hit_ms", [](auto& c, auto& v, auto& k) { c.synth.pool_hit_latency_ms = as_real(v, k); }},
      {"synth.malicious_p", [](auto& c, auto& v, auto& k) { c.synth.malicious_probability = as_real(v, k); }},
      {"synth.max_retries",
       [](auto& c, auto& v, auto& k) {
         const auto r = as_int(v, k);
         if (r < 0 || r > 1000) throw ConfigError(k, "must lie in [0, 1000]");
         c.synth.max_retries = static_cast<int>(r);
       }},
      {"latency.fast_ms", [](auto& c, auto& v, auto& k) { c.latency.fast_ms = as_real(v, k); }},
      {"latency.link_rtt_ms", [](auto& c, auto& v, auto& k) { c.latency.link_rtt_ms = as_real(v, k); }},
      {"psi.window", [](auto& c, auto& v, auto& k) { c.psi_window = as_int(v, k); }},
      {"quota.window", [](auto& c, auto& v, auto& k) { c.quota_window = as_int(v, k); }},
      {"quota.default", [](auto& c, auto& v, auto& k) { c.synth.default_quota = as_uint(v, k); }},
      {"quota.message_load", [](auto& c, auto& v, auto& k) { c.message_load = as_uint(v, k); }},
      {"pool.capacity", [](auto& c, auto& v, auto& k) { c.pool_capacity = as_uint(v, k); }},
      {"policy.denied_flags",
       [](auto& c, auto& v, auto& k) {
         if (!v.is_array()) throw ConfigError(k, "expected an array of strings");
         c.policy.denied_flags.clear();
         for (const auto& f : v) {
           if (!f.is_string()) throw ConfigError(k, "expected an array of strings");
           c.policy.denied_flags.insert(f.template get<std::string>());
         }
       }},
      {"context.base_classes",
       [](auto& c, auto& v, auto& k) {
         const auto n = as_uint(v, k);
         if (n > UINT32_MAX) throw ConfigError(k, "too many classes");
         c.base_classes = static_cast<std::uint32_t>(n);
       }},
      {"context.shock_classes",
       [](auto& c, auto& v, auto& k) {
         const auto n = as_uint(v, k);
         if (n > UINT32_MAX) throw ConfigError(k, "too many classes");
         c.shock_classes = static_cast<std::uint32_t>(n);
       }},
  };
  return table;
}

bool is_section(const std::string& name) {
  const auto it = setters().lower_bound(name + ".");
  return it != setters().end() && it->first.starts_with(name + ".");
}

void apply(ScenarioConfig& cfg, const json& node, const std::string& prefix) {
  if (!node.is_object()) throw ConfigError(prefix.empty() ? "<root>" : prefix, "expected an object");
  for (const auto& [name, value] : node.items()) {
    const std::string key = prefix.empty() ? name : prefix + "." + name;
    if (const auto it = setters().find(key); it != setters().end()) {
      it->second(cfg, value, key);
    } else if (value.is_object() && prefix.empty() && is_section(key)) {
      apply(cfg, value, key);
    } else {
      throw ConfigError(key, "unknown configuration key");
    }
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  require(total_cycles >= 1, "sim.total_cycles", "must be >= 1");
  require(positive(base.alpha), "fault.alpha", "must be a positive real");
  require(positive(base.beta), "fault.beta", "must be a positive real");
  if (shock_enabled) {
    require(shock.shock_cycle >= 1, "shock.cycle", "must be >= 1");
    require(shock.shock_cycle < total_cycles, "shock.cycle", "must be < sim.total_cycles");
    require(shock.params.origin_cycle == shock.shock_cycle, "shock.cycle", "process origin must equal shock.cycle");
    require(positive(shock.params.alpha), "shock.alpha", "must be a positive real");
    require(positive(shock.params.beta), "shock.beta", "must be a positive real");
    require(unit_interval(shock.invalidate_fraction), "shock.invalidate_fraction", "must lie in [0, 1]");
  }
  require(positive(synth.slow_latency_min_ms), "synth.latency_min_ms", "must be a positive real");
  require(positive(synth.slow_latency_max_ms) && synth.slow_latency_max_ms >= synth.slow_latency_min_ms,
          "synth.latency_max_ms", "must be a real >= synth.latency_min_ms");
  require(positive(synth.pool_hit_latency_ms), "synth.pool_hit_ms", "must be a positive real");
  require(unit_interval(synth.malicious_probability), "synth.malicious_p", "must lie in [0, 1]");
  require(synth.max_retries >= 0, "synth.max_retries", "must be >= 0");
  require(positive(latency.fast_ms), "latency.fast_ms", "must be a positive real");
  require(positive(latency.link_rtt_ms), "latency.link_rtt_ms", "must be a positive real");
  require(psi_window >= 1, "psi.window", "must be >= 1");
  require(quota_window >= 1, "quota.window", "must be >= 1");
  require(synth.default_quota >= 1, "quota.default", "must be >= 1");
  require(message_load >= 1, "quota.message_load", "must be >= 1");
  require(pool_capacity >= 1, "pool.capacity", "must be >= 1");
  require(base_classes >= 1, "context.base_classes", "must be >= 1");
  require(shock_classes >= 1, "context.shock_classes", "must be >= 1");
}

ScenarioConfig config_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  ScenarioConfig cfg;
  apply(cfg, doc, "");
  cfg.shock.params.origin_cycle = cfg.shock.shock_cycle;
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const ScenarioConfig& c, int indent) {
  json doc;
  doc["sim"] = {{"total_cycles", c.total_cycles}, {"seed", c.seed}};
  doc["fault"] = {{"mode", std::string(to_string(c.mode))}, {"alpha", c.base.alpha}, {"beta", c.base.beta}};
  doc["shock"] = {{"enabled", c.shock_enabled},
                  {"cycle", c.shock.shock_cycle},
                  {"alpha", c.shock.params.alpha},
                  {"beta", c.shock.params.beta},
                  {"invalidate_fraction", c.shock.invalidate_fraction},
                  {"new_contexts", c.shock_new_contexts}};
  doc["synth"] = {{"latency_min_ms", c.synth.slow_latency_min_ms},
                  {"latency_max_ms", c.synth.slow_latency_max_ms},
                  {"pool_hit_ms", c.synth.pool_hit_latency_ms},
                  {"malicious_p", c.synth.malicious_probability},
                  {"max_retries", c.synth.max_retries}};
  doc["latency"] = {{"fast_ms", c.latency.fast_ms}, {"link_rtt_ms", c.latency.link_rtt_ms}};
  doc["psi"] = {{"window", c.psi_window}};
  doc["quota"] = {{"window", c.quota_window}, {"default", c.synth.default_quota}, {"message_load", c.message_load}};
  doc["pool"] = {{"capacity", c.pool_capacity}};
  doc["policy"] = {{"denied_flags", json(c.policy.denied_flags)}};
  doc["context"] = {{"base_classes", c.base_classes}, {"shock_classes", c.shock_classes}};
  return doc.dump(indent);
}

}  // namespace darwinnet
