#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"

namespace darwinnet {

struct BatchRow {
  std::uint64_t seed = 0;
  std::int64_t total_agent_cycles = 0;
  std::optional<double> beta_hat;
  std::optional<double> dip_depth;
  std::optional<std::int64_t> recovery_time;
  double final_psi_win = 1.0;
  std::uint64_t log_hash = 0;  // FNV-1a of the run's event-log CSV

  friend bool operator==(const BatchRow&, const BatchRow&) = default;
};

// Runs cfg (with its own seed) and summarizes it.
BatchRow summarize_run(const ScenarioConfig& cfg, double epsilon = 0.02);

// One row per seed, in the order given. Seeds run on up to `threads` worker
// threads; every seed owns its whole pipeline.
std::vector<BatchRow> run_batch(const ScenarioConfig& cfg, std::span<const std::uint64_t> seeds,
                                unsigned threads = 1);

std::string batch_to_csv(const std::vector<BatchRow>& rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace darwinnet
