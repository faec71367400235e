#include "harness.hpp"

#include "cortex.hpp"
#include "errors.hpp"
#include "metrics.hpp"

namespace darwinnet {

std::string_view to_string(MessageKind k) {
  switch (k) {
    case MessageKind::offer: return "OFFER";
    case MessageKind::verdict: return "VERDICT";
    case MessageKind::dryrun_ok: return "DRYRUN_OK";
    case MessageKind::commit: return "COMMIT";
    case MessageKind::abort: return "ABORT";
  }
  return "UNKNOWN";
}

std::string_view to_string(AbortReason r) {
  switch (r) {
    case AbortReason::hash_mismatch: return "hash_mismatch";
    case AbortReason::bad_signature: return "bad_signature";
    case AbortReason::immune_reject: return "immune_reject";
    case AbortReason::policy_reject: return "policy_reject";
  }
  return "unknown";
}

namespace {

NegotiationMessage message(MessageKind kind, const NodeState& sender, const ProtocolGene& gene) {
  return {kind, sender.node_id(), gene.gene_id, gene.code_hash, gene.signature_tag, std::nullopt, std::nullopt};
}

std::optional<AbortReason> responder_checks(const ProtocolGene& gene, const SharedKey& key,
                                            const PolicyDenylist& deny) {
  if (gene.compute_code_hash() != gene.code_hash) return AbortReason::hash_mismatch;
  if (!verify_tag(gene.code_hash, gene.signature_tag, key)) return AbortReason::bad_signature;
  if (policy_filter(gene, deny)) return AbortReason::policy_reject;
  if (immune_verify(gene, key) != ImmuneVerdict::pass) return AbortReason::immune_reject;
  return std::nullopt;
}

}  // namespace

NegotiationResult negotiate(NodeState& initiator, NodeState& responder, const ProtocolGene& gene,
                            std::int64_t cycle, const LatencyModel& lm, const SharedKey& key,
                            const PolicyDenylist& deny) {
  NegotiationResult out;
  out.transcript.push_back(message(MessageKind::offer, initiator, gene));

  if (auto reason = responder_checks(gene, key, deny)) {
    auto abort = message(MessageKind::abort, responder, gene);
    abort.reason = reason;
    out.transcript.push_back(std::move(abort));
    out.reason = reason;
    out.cost_ms = lm.link_rtt_ms;
    return out;
  }

  out.transcript.push_back(message(MessageKind::verdict, responder, gene));
  out.transcript.push_back(message(MessageKind::dryrun_ok, initiator, gene));
  auto commit = message(MessageKind::commit, responder, gene);
  commit.activation_cycle = cycle + 1;
  out.transcript.push_back(std::move(commit));

  initiator.hot_swap(gene, cycle + 1);
  responder.hot_swap(gene, cycle + 1);
  out.committed = true;
  out.activation_cycle = cycle + 1;
  out.cost_ms = 2.0 * lm.link_rtt_ms;
  return out;
}

ContextSignature context_of(EventSource source, std::uint32_t class_count, Rng& rng) {
  if (class_count < 1) throw DomainError("class_count must be >= 1");
  return ContextSignature::of(source, static_cast<std::uint32_t>(rng.below(class_count)));
}

namespace {

struct CycleDemand {
  int mismatches = 0;
  EventSource first_source = EventSource::base;
};

std::vector<CycleDemand> per_cycle_demand(const EventStream& stream, std::int64_t total_cycles) {
  std::vector<CycleDemand> out(static_cast<std::size_t>(total_cycles) + 1);
  for (const auto& [cycle, count] : events_to_cycles(stream, total_cycles))
    out[static_cast<std::size_t>(cycle)].mismatches = count;
  // Events are time-sorted, so the first event seen per cycle is the earliest.
  std::int64_t last = 0;
  for (const auto& e : stream.events) {
    const auto c = owning_cycle(e.time);
    if (c != last) out[static_cast<std::size_t>(c)].first_source = e.source;
    last = c;
  }
  return out;
}

}  // namespace

ScenarioRun run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();

  Rng base_rng(cfg.seed, Stream::base_faults);
  Rng shock_rng(cfg.seed, Stream::shock_faults);
  Rng context_rng(cfg.seed, Stream::contexts);
  Rng synth_rng(cfg.seed, Stream::synthesis);
  Rng invalidation_rng(cfg.seed, Stream::invalidation);

  const auto horizon = static_cast<double>(cfg.total_cycles);
  ScenarioRun run;
  run.events = generate(cfg.base, horizon, cfg.mode, base_rng);
  if (cfg.shock_enabled) run.events = superimpose(run.events, cfg.shock, cfg.mode, shock_rng, horizon);
  const auto demand = per_cycle_demand(run.events, cfg.total_cycles);

  const ProtocolGene baseline = make_baseline_gene(cfg.key);
  NodeState initiator("A", baseline, cfg.quota_window);
  NodeState responder("B", baseline, cfg.quota_window);
  GenePool pool(cfg.pool_capacity);
  GeneIdCounter ids;
  metrics::PsiTracker psi(cfg.psi_window);

  run.log.psi_window = cfg.psi_window;
  run.log.records.reserve(static_cast<std::size_t>(cfg.total_cycles));
  run.traces.reserve(static_cast<std::size_t>(cfg.total_cycles));

  for (std::int64_t c = 1; c <= cfg.total_cycles; ++c) {
    CycleRecord rec;
    CycleTrace trace;
    rec.cycle = c;

    const bool committed = initiator.begin_cycle(c);
    responder.begin_cycle(c);
    if (committed) rec.events.emplace_back(tag::swap_commit);
    trace.initiator_begin = initiator.active_gene_id();
    trace.responder_begin = responder.active_gene_id();

    if (cfg.shock_enabled && c == cfg.shock.shock_cycle) {
      pool.invalidate_fraction(cfg.shock.invalidate_fraction, invalidation_rng);
      rec.events.emplace_back(tag::shock);
    }

    const CycleDemand& d = demand[static_cast<std::size_t>(c)];
    rec.mismatches = d.mismatches;
    CyclePath path = CyclePath::fast;
    double extra_ms = 0.0;

    if (sense(d.mismatches)) {
      const bool fresh = d.first_source == EventSource::shock && cfg.shock_new_contexts;
      const ContextSignature ctx = fresh ? context_of(EventSource::shock, cfg.shock_classes, context_rng)
                                         : context_of(EventSource::base, cfg.base_classes, context_rng);
      trace.context = ctx;

      if (auto pooled = pool.lookup(ctx)) {
        path = CyclePath::slow_pool;
        auto nego = negotiate(initiator, responder, *pooled, c, cfg.latency, cfg.key, cfg.policy);
        extra_ms = cfg.synth.pool_hit_latency_ms + nego.cost_ms;
        if (!nego.committed) rec.events.emplace_back(tag::abort);
        trace.negotiation = std::move(nego);
      } else {
        const std::uint64_t first_id = ids.last() + 1;
        SynthesisOutcome outcome =
            mutate_with_retries(ctx, c, cfg.synth, cfg.policy, cfg.key, ids, synth_rng);
        for (std::uint64_t id = first_id; id <= ids.last(); ++id) trace.synthesized.push_back(id);
        for (std::size_t i = 0; i < outcome.rejection_reasons.size(); ++i)
          rec.events.emplace_back(tag::immune_reject);
        extra_ms = outcome.latency_ms;

        if (outcome.gene) {
          path = CyclePath::slow_synth;
          auto nego = negotiate(initiator, responder, *outcome.gene, c, cfg.latency, cfg.key, cfg.policy);
          extra_ms += nego.cost_ms;
          if (nego.committed)
            pool.insert(*outcome.gene);
          else
            rec.events.emplace_back(tag::abort);
          trace.negotiation = std::move(nego);
        } else {
          path = CyclePath::fallback;
          if (initiator.active_gene_id() != baseline.gene_id || initiator.pending_swap()) {
            initiator.hot_swap(initiator.baseline_gene(), c + 1);
            responder.hot_swap(responder.baseline_gene(), c + 1);
          }
        }
      }
    }

    const CycleOutcome outcome = execute_cycle(initiator, path, cfg.latency, extra_ms, cfg.message_load);
    execute_cycle(responder, path, cfg.latency, extra_ms, cfg.message_load);
    trace.initiator_end = initiator.active_gene_id();
    trace.responder_end = responder.active_gene_id();

    const bool melted = initiator.quota_check(c) == QuotaVerdict::melt;
    responder.quota_check(c);
    if (melted) rec.events.emplace_back(tag::melt);
    trace.initiator_after = initiator.active_gene_id();
    trace.responder_after = responder.active_gene_id();

    psi.push(outcome.agent_cycle);
    rec.path = outcome.path;
    rec.latency_ms = outcome.latency_ms;
    rec.agent = outcome.agent_cycle;
    rec.active_gene_id = trace.initiator_begin;
    rec.psi_cum = psi.cumulative();
    rec.psi_win = psi.windowed();

    run.log.records.push_back(std::move(rec));
    run.traces.push_back(std::move(trace));
  }

  run.initiator_genes = initiator.gene_table();
  run.responder_genes = responder.gene_table();
  return run;
}

}  // namespace darwinnet
