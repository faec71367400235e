#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"
#include "event_log.hpp"
#include "fault_process.hpp"
#include "gene.hpp"
#include "node.hpp"

namespace darwinnet {

enum class MessageKind : std::uint8_t { offer, verdict, dryrun_ok, commit, abort };
enum class AbortReason : std::uint8_t { hash_mismatch, bad_signature, immune_reject, policy_reject };

std::string_view to_string(MessageKind k);
std::string_view to_string(AbortReason r);

struct NegotiationMessage {
  MessageKind kind;
  std::string sender;
  std::uint64_t gene_id = 0;
  std::uint64_t code_hash = 0;
  std::uint64_t signature_tag = 0;
  std::optional<std::int64_t> activation_cycle;  // COMMIT only
  std::optional<AbortReason> reason;             // ABORT only
};

struct NegotiationResult {
  bool committed = false;
  std::int64_t activation_cycle = 0;
  double cost_ms = 0.0;
  std::optional<AbortReason> reason;
  std::vector<NegotiationMessage> transcript;
};

// OFFER -> VERDICT -> DRYRUN_OK -> COMMIT between two peers. The responder
// re-derives the hash, checks the tag, the policy template and the immune
// gate; the first failure aborts after one round trip and leaves both nodes
// untouched. A commit schedules the swap on both nodes for cycle + 1.
NegotiationResult negotiate(NodeState& initiator, NodeState& responder, const ProtocolGene& gene,
                            std::int64_t cycle, const LatencyModel& lm, const SharedKey& key,
                            const PolicyDenylist& deny);

// Uniform context class for a mismatch from `source`.
ContextSignature context_of(EventSource source, std::uint32_t class_count, Rng& rng);

// Diagnostics for one cycle that the CSV does not carry.
struct CycleTrace {
  std::uint64_t initiator_begin = 0;
  std::uint64_t initiator_end = 0;
  std::uint64_t responder_begin = 0;
  std::uint64_t responder_end = 0;
  std::uint64_t initiator_after = 0;  // after the quota check
  std::uint64_t responder_after = 0;
  std::optional<ContextSignature> context;
  std::optional<NegotiationResult> negotiation;
  std::vector<std::uint64_t> synthesized;  // every gene id drawn this cycle
};

struct ScenarioRun {
  EventLog log;
  EventStream events;
  std::vector<CycleTrace> traces;
  std::map<std::uint64_t, ProtocolGene> initiator_genes;
  std::map<std::uint64_t, ProtocolGene> responder_genes;
};

// Runs the two-node scenario; throws ConfigError before any cycle runs when
// cfg is invalid. Deterministic in cfg.
ScenarioRun run_scenario(const ScenarioConfig& cfg);

}  // namespace darwinnet
