#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gene.hpp"

namespace darwinnet {

enum class CyclePath : std::uint8_t { fast, slow_synth, slow_pool, fallback };

std::string_view to_string(CyclePath p);
CyclePath cycle_path_from_string(std::string_view s);

inline bool is_agent_path(CyclePath p) { return p != CyclePath::fast; }

// Event tags carried by cycle records.
namespace tag {
inline constexpr std::string_view swap_commit = "SWAP_COMMIT";
inline constexpr std::string_view melt = "MELT";
inline constexpr std::string_view immune_reject = "IMMUNE_REJECT";
inline constexpr std::string_view abort = "ABORT";
inline constexpr std::string_view shock = "SHOCK";
}  // namespace tag

struct LatencyModel {
  double fast_ms = 1.0;
  double link_rtt_ms = 5.0;

  void validate() const;
};

struct CycleOutcome {
  CyclePath path = CyclePath::fast;
  double latency_ms = 0.0;
  bool agent_cycle = false;
  std::vector<std::string> events;
};

struct PendingSwap {
  std::uint64_t gene_id;
  std::int64_t activation_cycle;
};

enum class QuotaVerdict : std::uint8_t { ok, melt };

// One node: the fluid-cortex executor plus the L0 quota monitor. Advanced
// only by the simulation loop.
class NodeState {
 public:
  NodeState(std::string node_id, ProtocolGene baseline, std::int64_t quota_window = 50);

  const std::string& node_id() const { return node_id_; }
  const ProtocolGene& baseline_gene() const { return gene_table_.at(baseline_id_); }
  const ProtocolGene& active_gene() const { return gene_table_.at(active_id_); }
  std::uint64_t active_gene_id() const { return active_id_; }
  const std::map<std::uint64_t, ProtocolGene>& gene_table() const { return gene_table_; }
  const std::optional<PendingSwap>& pending_swap() const { return pending_; }
  std::uint64_t quota_counter() const { return quota_counter_; }
  std::int64_t quota_window_start() const { return quota_window_start_; }
  std::int64_t quota_window() const { return quota_window_; }
  std::int64_t current_cycle() const { return current_cycle_; }

  // Enters `cycle`: commits a pending swap due now and rolls the quota window.
  // Returns true when a swap committed.
  bool begin_cycle(std::int64_t cycle);

  // Installs gene and schedules its activation. A swap already pending is
  // replaced (latest wins); the return value reports that. Throws
  // SchedulingError unless activation_cycle > current cycle.
  bool hot_swap(const ProtocolGene& gene, std::int64_t activation_cycle);

  void record_messages(std::uint64_t count) { quota_counter_ += count; }

  // Melts to baseline when the active gene exceeded its quota in the current
  // window. A melt also cancels any pending swap.
  QuotaVerdict quota_check(std::int64_t cycle);

 private:
  std::string node_id_;
  std::uint64_t baseline_id_;
  std::uint64_t active_id_;
  std::map<std::uint64_t, ProtocolGene> gene_table_;
  std::optional<PendingSwap> pending_;
  std::uint64_t quota_counter_ = 0;
  std::int64_t quota_window_start_ = 1;
  std::int64_t quota_window_;
  std::int64_t current_cycle_ = 0;
};

// Trigger iff at least one mismatch landed in the cycle.
inline bool sense(int mismatch_count) { return mismatch_count >= 1; }

// Runs one cycle on `node`. Fast cycles cost exactly lm.fast_ms; agent cycles
// cost extra_latency_ms. Charges `message_load` messages to the quota counter.
CycleOutcome execute_cycle(NodeState& node, CyclePath path, const LatencyModel& lm,
                           double extra_latency_ms, std::uint64_t message_load = 1);

}  // namespace darwinnet
