#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gene.hpp"
#include "random.hpp"

namespace darwinnet {

struct SynthesizerConfig {
  double slow_latency_min_ms = 200.0;
  double slow_latency_max_ms = 500.0;
  double pool_hit_latency_ms = 10.0;
  double malicious_probability = 0.05;
  int max_retries = 3;
  std::uint64_t default_quota = 1'000'000;

  void validate() const;
};

inline constexpr std::string_view amplification_flag = "amplification";

struct PolicyDenylist {
  std::set<std::string> denied_flags{std::string(amplification_flag)};
};

// Benign capabilities a synthesized gene may carry.
inline constexpr std::string_view benign_flags[] = {"binary_framing", "delta_compression",
                                                    "header_elision", "selective_fec"};

// Monotone gene-id source, owned by the simulation loop.
class GeneIdCounter {
 public:
  std::uint64_t next() { return ++last_; }
  std::uint64_t last() const { return last_; }

 private:
  std::uint64_t last_ = 0;  // 0 is the baseline gene
};

struct SynthesisAttempt {
  ProtocolGene gene;
  double latency_ms;
};

// Mock of the reasoning engine. Draw order per call: malicious coin, benign
// flag, latency.
SynthesisAttempt synthesize(const ContextSignature& ctx, std::int64_t cycle, const SynthesizerConfig& cfg,
                            GeneIdCounter& ids, const SharedKey& key, Rng& rng);

// Empty when accepted; otherwise the first denied flag carried by the gene.
std::optional<std::string> policy_filter(const ProtocolGene& gene, const PolicyDenylist& deny);

enum class ImmuneVerdict : std::uint8_t { pass, hash_mismatch, bad_signature, missing_quota };

std::string_view to_string(ImmuneVerdict v);

// Checks, in order: descriptor hash, signature tag, declared quota.
ImmuneVerdict immune_verify(const ProtocolGene& gene, const SharedKey& key);

struct SynthesisOutcome {
  std::optional<ProtocolGene> gene;  // empty means fallback to baseline
  double latency_ms = 0.0;
  int retries_used = 0;
  std::vector<std::string> rejection_reasons;

  bool fallback() const { return !gene.has_value(); }
};

// Up to 1 + max_retries synthesize -> policy_filter -> immune_verify rounds.
// Every attempt's latency is charged, rejected or not.
SynthesisOutcome mutate_with_retries(const ContextSignature& ctx, std::int64_t cycle,
                                     const SynthesizerConfig& cfg, const PolicyDenylist& deny,
                                     const SharedKey& key, GeneIdCounter& ids, Rng& rng);

}  // namespace darwinnet
