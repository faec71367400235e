#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cortex.hpp"
#include "fault_process.hpp"
#include "gene.hpp"
#include "node.hpp"

namespace darwinnet {

struct ScenarioConfig {
  std::int64_t total_cycles = 2000;
  std::uint64_t seed = 1;
  FaultMode mode = FaultMode::stochastic;
  FaultParams base{2.0, 0.6, 0};

  bool shock_enabled = true;
  ShockSpec shock;
  bool shock_new_contexts = true;

  SynthesizerConfig synth;
  LatencyModel latency;
  PolicyDenylist policy;

  std::int64_t psi_window = 50;
  std::int64_t quota_window = 50;
  std::size_t pool_capacity = 64;
  std::uint32_t base_classes = 8;
  std::uint32_t shock_classes = 8;
  std::uint64_t message_load = 1;
  SharedKey key{"darwinnet-l0-anchor"};

  // Throws ConfigError naming the offending key path.
  void validate() const;
};

// Parses a JSON document whose nested objects mirror the dotted key paths
// (sim.total_cycles -> {"sim": {"total_cycles": ...}}). Absent keys keep
// their defaults; unknown keys and ill-typed values are rejected. The result
// is validated.
ScenarioConfig config_from_json(std::string_view text);
ScenarioConfig load_config(const std::string& path);

// Full key tree, every key present; parses back to an equal config.
std::string config_to_json(const ScenarioConfig& cfg, int indent = 2);

}  // namespace darwinnet
