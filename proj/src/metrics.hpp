#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace darwinnet::metrics {

// M = 1 - n_agent / n_total.
double psi_cumulative(std::int64_t n_agent, std::int64_t n_total);

// PSI over the last w = min(cycle, window) cycles of agent_flags, where
// agent_flags[i] describes cycle i + 1. Uses exactly the same arithmetic as
// psi_cumulative so equal inputs give bit-equal results.
double psi_windowed(std::span<const std::uint8_t> agent_flags, std::int64_t cycle, std::int64_t window);

double latency_moving_avg(std::span<const double> latencies, std::int64_t cycle, std::int64_t window);
double latency_median(std::span<const double> latencies, std::int64_t cycle, std::int64_t window);

// Incremental PSI for a growing log, O(1) per cycle.
class PsiTracker {
 public:
  explicit PsiTracker(std::int64_t window);

  void push(bool agent);

  std::int64_t cycles() const { return static_cast<std::int64_t>(flags_.size()); }
  std::int64_t agent_cycles() const { return n_agent_; }
  double cumulative() const { return psi_cumulative(n_agent_, cycles()); }
  double windowed() const;

 private:
  std::int64_t window_;
  std::int64_t n_agent_ = 0;
  std::int64_t in_window_ = 0;
  std::vector<std::uint8_t> flags_;
};

}  // namespace darwinnet::metrics
