#include "cortex.hpp"

#include <cmath>
#include <iterator>

#include "errors.hpp"

namespace darwinnet {

void SynthesizerConfig::validate() const {
  if (!(slow_latency_min_ms > 0.0)) throw DomainError("slow_latency_min_ms must be positive");
  if (!(slow_latency_max_ms >= slow_latency_min_ms))
    throw DomainError("slow_latency_max_ms must be >= slow_latency_min_ms");
  if (!(pool_hit_latency_ms > 0.0)) throw DomainError("pool_hit_latency_ms must be positive");
  if (!(malicious_probability >= 0.0 && malicious_probability <= 1.0))
    throw DomainError("malicious_probability must lie in [0, 1]");
  if (max_retries < 0) throw DomainError("max_retries must be non-negative");
  if (default_quota < 1) throw DomainError("default_quota must be >= 1");
}

SynthesisAttempt synthesize(const ContextSignature& ctx, std::int64_t cycle, const SynthesizerConfig& cfg,
                            GeneIdCounter& ids, const SharedKey& key, Rng& rng) {
  const bool malicious = rng.bernoulli(cfg.malicious_probability);
  const auto flag_index = rng.below(std::size(benign_flags));
  const double latency = rng.uniform(cfg.slow_latency_min_ms, cfg.slow_latency_max_ms);

  ProtocolGene g;
  g.gene_id = ids.next();
  g.context = ctx;
  g.policy_flags.emplace(benign_flags[flag_index]);
  if (malicious) g.policy_flags.emplace(amplification_flag);
  g.quota = cfg.default_quota;
  g.synth_cycle = cycle;
  g.version = 1;
  return {seal(std::move(g), key), latency};
}

std::optional<std::string> policy_filter(const ProtocolGene& gene, const PolicyDenylist& deny) {
  for (const auto& flag : gene.policy_flags)
    if (deny.denied_flags.contains(flag)) return flag;
  return std::nullopt;
}

std::string_view to_string(ImmuneVerdict v) {
  switch (v) {
    case ImmuneVerdict::pass: return "pass";
    case ImmuneVerdict::hash_mismatch: return "hash_mismatch";
    case ImmuneVerdict::bad_signature: return "bad_signature";
    case ImmuneVerdict::missing_quota: return "missing_quota";
  }
  return "unknown";
}

ImmuneVerdict immune_verify(const ProtocolGene& gene, const SharedKey& key) {
  if (gene.compute_code_hash() != gene.code_hash) return ImmuneVerdict::hash_mismatch;
  if (!verify_tag(gene.code_hash, gene.signature_tag, key)) return ImmuneVerdict::bad_signature;
  if (gene.quota < 1) return ImmuneVerdict::missing_quota;
  return ImmuneVerdict::pass;
}

SynthesisOutcome mutate_with_retries(const ContextSignature& ctx, std::int64_t cycle,
                                     const SynthesizerConfig& cfg, const PolicyDenylist& deny,
                                     const SharedKey& key, GeneIdCounter& ids, Rng& rng) {
  SynthesisOutcome out;
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    out.retries_used = attempt;
    SynthesisAttempt a = synthesize(ctx, cycle, cfg, ids, key, rng);
    out.latency_ms += a.latency_ms;
    if (auto denied = policy_filter(a.gene, deny)) {
      out.rejection_reasons.push_back("policy_reject:" + *denied);
      continue;
    }
    if (auto verdict = immune_verify(a.gene, key); verdict != ImmuneVerdict::pass) {
      out.rejection_reasons.push_back("immune_reject:" + std::string(to_string(verdict)));
      continue;
    }
    out.gene = std::move(a.gene);
    return out;
  }
  return out;
}

}  // namespace darwinnet
