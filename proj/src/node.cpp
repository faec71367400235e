#include "node.hpp"

#include "errors.hpp"

namespace darwinnet {

std::string_view to_string(CyclePath p) {
  switch (p) {
    case CyclePath::fast: return "fast";
    case CyclePath::slow_synth: return "slow_synth";
    case CyclePath::slow_pool: return "slow_pool";
    case CyclePath::fallback: return "fallback";
  }
  return "unknown";
}

CyclePath cycle_path_from_string(std::string_view s) {
  if (s == "fast") return CyclePath::fast;
  if (s == "slow_synth") return CyclePath::slow_synth;
  if (s == "slow_pool") return CyclePath::slow_pool;
  if (s == "fallback") return CyclePath::fallback;
  throw DomainError("unknown cycle path '" + std::string(s) + "'");
}

void LatencyModel::validate() const {
  if (!(fast_ms > 0.0)) throw DomainError("fast_ms must be positive");
  if (!(link_rtt_ms > 0.0)) throw DomainError("link_rtt_ms must be positive");
}

NodeState::NodeState(std::string node_id, ProtocolGene baseline, std::int64_t quota_window)
    : node_id_(std::move(node_id)),
      baseline_id_(baseline.gene_id),
      active_id_(baseline.gene_id),
      quota_window_(quota_window) {
  if (quota_window_ < 1) throw DomainError("quota window must be >= 1");
  gene_table_.emplace(baseline.gene_id, std::move(baseline));
}

bool NodeState::begin_cycle(std::int64_t cycle) {
  current_cycle_ = cycle;
  if (pending_ && pending_->activation_cycle == cycle) {
    active_id_ = pending_->gene_id;
    quota_counter_ = 0;
    quota_window_start_ = cycle;
    pending_.reset();
    return true;
  }
  if (cycle - quota_window_start_ >= quota_window_) {
    quota_window_start_ += ((cycle - quota_window_start_) / quota_window_) * quota_window_;
    quota_counter_ = 0;
  }
  return false;
}

bool NodeState::hot_swap(const ProtocolGene& gene, std::int64_t activation_cycle) {
  if (activation_cycle <= current_cycle_)
    throw SchedulingError("activation cycle " + std::to_string(activation_cycle) +
                          " is not after the current cycle " + std::to_string(current_cycle_));
  gene_table_.insert_or_assign(gene.gene_id, gene);
  const bool replaced = pending_.has_value();
  pending_ = PendingSwap{gene.gene_id, activation_cycle};
  return replaced;
}

QuotaVerdict NodeState::quota_check(std::int64_t cycle) {
  const ProtocolGene& active = active_gene();
  if (active_id_ == baseline_id_ || active.quota == unlimited_quota) return QuotaVerdict::ok;
  if (quota_counter_ <= active.quota) return QuotaVerdict::ok;
  active_id_ = baseline_id_;
  quota_counter_ = 0;
  quota_window_start_ = cycle + 1;
  pending_.reset();
  return QuotaVerdict::melt;
}

CycleOutcome execute_cycle(NodeState& node, CyclePath path, const LatencyModel& lm,
                           double extra_latency_ms, std::uint64_t message_load) {
  CycleOutcome out;
  out.path = path;
  out.agent_cycle = is_agent_path(path);
  out.latency_ms = out.agent_cycle ? extra_latency_ms : lm.fast_ms;
  node.record_messages(message_load);
  return out;
}

}  // namespace darwinnet
