// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any selected criterion fails.
//
//   acceptance                 all criteria
//   acceptance --criterion 4   one criterion
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "batch.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "event_log.hpp"
#include "fault_process.hpp"
#include "harness.hpp"
#include "hash.hpp"
#include "metrics.hpp"

using namespace darwinnet;

namespace {

constexpr int kSeeds = 100;
const FaultParams kBase{2.0, 0.6, 0};
constexpr double kHorizon = 2000.0;

struct Verdict {
  bool pass = true;
  std::string detail;
  double budget_s = 0.0;  // 0: no runtime bound
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// The default scenario for seeds 1..100, shared by criteria 3-5.
const std::vector<ScenarioRun>& default_runs() {
  static const std::vector<ScenarioRun> runs = [] {
    std::vector<ScenarioRun> out;
    ScenarioConfig cfg;
    for (int s = 1; s <= kSeeds; ++s) {
      cfg.seed = static_cast<std::uint64_t>(s);
      out.push_back(run_scenario(cfg));
    }
    return out;
  }();
  return runs;
}

Verdict duane_linearity() {
  Verdict v{true, {}, 10.0};
  const auto det = deterministic_schedule(kBase, kHorizon).times();
  const auto fit = analysis::loglog_regression(analysis::duane_points(det));
  std::vector<double> slopes;
  for (int s = 1; s <= kSeeds; ++s) {
    Rng rng(static_cast<std::uint64_t>(s), Stream::base_faults);
    const auto t = sample_nhpp(kBase, kHorizon, rng).times();
    slopes.push_back(analysis::loglog_regression(analysis::duane_points(t)).slope);
  }
  const double med = median(slopes);
  v.pass = std::abs(fit.slope + 0.4) <= 0.02 && fit.r_squared >= 0.999 && std::abs(med + 0.4) <= 0.05;
  v.detail = fmt("deterministic slope=%.4f R2=%.5f; stochastic median slope=%.4f over %d seeds", fit.slope,
                 fit.r_squared, med, kSeeds);
  return v;
}

Verdict mle_recovery() {
  Verdict v{true, {}, 10.0};
  std::vector<double> betas;
  for (int s = 1; s <= kSeeds; ++s) {
    Rng rng(static_cast<std::uint64_t>(s), Stream::base_faults);
    betas.push_back(analysis::fit_growth(sample_nhpp(kBase, kHorizon, rng).times(), 0.0, kHorizon).beta_hat);
  }
  const double med = median(betas);
  const double det = analysis::fit_growth(deterministic_schedule(kBase, kHorizon).times(), 0.0, kHorizon).beta_hat;
  v.pass = med >= 0.55 && med <= 0.65 && det >= 0.58 && det <= 0.62;
  v.detail = fmt("stochastic median beta_hat=%.4f over %d seeds; deterministic beta_hat=%.4f", med, kSeeds, det);
  return v;
}

Verdict psi_convergence() {
  Verdict v{true, {}, 30.0};
  std::vector<double> at200, at950;
  int monotone_violations = 0;
  for (const auto& run : default_runs()) {
    const auto& recs = run.log.records;
    at200.push_back(run.log.at_cycle(200).psi_win);
    at950.push_back(run.log.at_cycle(950).psi_win);
    std::size_t last_agent = 0;
    for (std::size_t i = 0; i < recs.size(); ++i)
      if (recs[i].agent) last_agent = i;
    for (std::size_t i = last_agent + 1; i < recs.size(); ++i)
      if (recs[i].psi_cum < recs[i - 1].psi_cum) ++monotone_violations;
  }
  const double m200 = median(at200), m950 = median(at950);
  v.pass = m200 >= 0.85 && m950 >= 0.90 && monotone_violations == 0;
  v.detail = fmt("median psi_win@200=%.4f @950=%.4f; psi_cum decreases after last agent cycle: %d", m200, m950,
                 monotone_violations);
  return v;
}

Verdict anti_fragility() {
  Verdict v{true, {}, 30.0};
  std::vector<double> dips, times;
  int unrecovered = 0;
  for (const auto& run : default_runs()) {
    const auto rep = analysis::recovery_metrics(run.log, 1000, 0.02);
    dips.push_back(rep.dip_depth);
    if (rep.recovery_cycle && *rep.recovery_cycle < 1500) {
      times.push_back(static_cast<double>(*rep.recovery_time));
    } else {
      ++unrecovered;
      times.push_back(std::numeric_limits<double>::infinity());
    }
  }
  const double md = median(dips), mt = median(times);
  v.pass = md >= 0.05 && mt <= 100.0 && unrecovered == 0;
  v.detail = fmt("median dip_depth=%.4f; median recovery_time=%.1f; runs not recovered before 1500: %d/%d", md, mt,
                 unrecovered, kSeeds);
  return v;
}

Verdict latency_collapse() {
  Verdict v{true, {}, 30.0};
  const ScenarioConfig cfg;
  const double cap = (1 + cfg.synth.max_retries) * 500.0 + 20.0;
  int bad_fast = 0, bad_max = 0, bad_median = 0, bad_tail = 0;
  double worst_max = 0.0, worst_ratio = 0.0;
  for (const auto& run : default_runs()) {
    const auto lat = run.log.latencies();
    double mx = 0.0;
    for (const auto& r : run.log.records) {
      if (r.path == CyclePath::fast && r.latency_ms != 1.0) ++bad_fast;
      mx = std::max(mx, r.latency_ms);
    }
    worst_max = std::max(worst_max, mx);
    bad_max += mx > cap;
    // Median over cycles 500..1000: the trailing 501-cycle window at 1000.
    bad_median += metrics::latency_median(lat, 1000, 501) != 1.0;
    double head = 0.0, tail = 0.0;
    for (std::int64_t c = 1; c <= 50; ++c) head += metrics::latency_moving_avg(lat, c, cfg.psi_window);
    for (std::int64_t c = 1901; c <= 2000; ++c) tail += metrics::latency_moving_avg(lat, c, cfg.psi_window);
    const double ratio = (tail / 100.0) / (head / 50.0);
    worst_ratio = std::max(worst_ratio, ratio);
    bad_tail += ratio > 0.25;
  }
  v.pass = !bad_fast && !bad_max && !bad_median && !bad_tail;
  v.detail = fmt("(a) fast cycles != 1.0 ms: %d; (b) max latency %.1f ms (cap %.0f), runs over cap: %d; "
                 "(c) runs with median(500..1000) != 1.0: %d; (d) worst tail/head windowed latency %.3f, runs > 0.25: %d",
                 bad_fast, worst_max, cap, bad_max, bad_median, worst_ratio, bad_tail);
  return v;
}

Verdict recount_oracle() {
  Verdict v;
  std::vector<std::pair<std::string, std::string>> logs;
  for (const char* name : {"default", "deterministic", "no_shock", "melt"})
    logs.emplace_back(name, read_file(std::string(DARWINNET_GOLDEN_DIR) + "/" + name + "/event_log.csv"));
  int mismatches = 0;
  std::size_t rows = 0;
  for (const auto& [name, text] : logs) {
    const auto log = event_log_from_csv(text);
    std::vector<std::uint8_t> flags;
    std::int64_t n_agent = 0;
    for (const auto& r : log.records) {
      flags.push_back(r.agent ? 1 : 0);
      n_agent += r.agent;
      ++rows;
      if (format_fixed(r.psi_cum, 6) != format_fixed(metrics::psi_cumulative(n_agent, r.cycle), 6)) ++mismatches;
      if (format_fixed(r.psi_win, 6) != format_fixed(metrics::psi_windowed(flags, r.cycle, log.psi_window), 6))
        ++mismatches;
    }
    std::int64_t recount = 0;
    for (std::uint8_t f : flags) recount += f;
    if (recount != n_agent ||
        format_fixed(log.records.back().psi_cum, 6) !=
            format_fixed(1.0 - static_cast<double>(recount) / static_cast<double>(log.total_cycles()), 6))
      ++mismatches;
  }
  v.pass = mismatches == 0 && rows > 0;
  v.detail = fmt("%zu golden logs, %zu rows, mismatched cells: %d", logs.size(), rows, mismatches);
  return v;
}

// ---- criterion 7 -----------------------------------------------------------

struct NodeSnapshot {
  std::uint64_t active;
  std::optional<PendingSwap> pending;
  std::vector<std::uint64_t> table;
  std::uint64_t counter;
  bool operator==(const NodeSnapshot& o) const {
    const bool same_pending = pending.has_value() == o.pending.has_value() &&
                              (!pending || (pending->gene_id == o.pending->gene_id &&
                                            pending->activation_cycle == o.pending->activation_cycle));
    return active == o.active && same_pending && table == o.table && counter == o.counter;
  }
};

NodeSnapshot snapshot(const NodeState& n) {
  NodeSnapshot s{n.active_gene_id(), n.pending_swap(), {}, n.quota_counter()};
  for (const auto& [id, g] : n.gene_table()) s.table.push_back(id);
  return s;
}

bool carries_denied(const ProtocolGene& g, const PolicyDenylist& deny) { return policy_filter(g, deny).has_value(); }

Verdict protocol_machine() {
  Verdict v;
  const SharedKey key{"darwinnet-l0-anchor"};
  const PolicyDenylist deny;
  const LatencyModel lm;
  Rng rng(0xACCE97);
  int consensus = 0, abort_safety = 0, guardrail = 0, commits = 0, aborts = 0;

  // Direct negotiation trials between two nodes with random history.
  const int trials = 10000;
  std::uint64_t next_id = 1;
  for (int t = 0; t < trials; ++t) {
    NodeState a("A", make_baseline_gene(key)), b("B", make_baseline_gene(key));
    std::int64_t cycle = 1 + static_cast<std::int64_t>(rng.below(1000));
    a.begin_cycle(cycle);
    b.begin_cycle(cycle);
    if (rng.bernoulli(0.5)) {
      ProtocolGene prior;
      prior.gene_id = next_id++;
      prior.context = ContextSignature::of(EventSource::base, 0);
      prior.quota = 1000;
      prior = seal(prior, key);
      a.hot_swap(prior, cycle + 1);
      b.hot_swap(prior, cycle + 1);
      a.begin_cycle(++cycle);
      b.begin_cycle(cycle);
    }

    ProtocolGene g;
    g.gene_id = next_id++;
    g.context = ContextSignature::of(rng.bernoulli(0.5) ? EventSource::base : EventSource::shock,
                                     static_cast<std::uint32_t>(rng.below(8)));
    g.policy_flags = {"delta_compression"};
    g.quota = 1 + rng.below(1'000'000);
    g.synth_cycle = cycle;
    g = seal(g, key);
    switch (rng.below(6)) {
      case 0: g.code_hash ^= std::uint64_t{1} << rng.below(64); break;
      case 1: g.signature_tag = sign_tag(g.code_hash, SharedKey{"intruder"}); break;
      case 2:
        g.policy_flags.insert("amplification");
        g = seal(g, key);
        break;
      case 3:
        g.quota = 0;
        g = seal(g, key);
        break;
      case 4: g.gene_id ^= 1; break;  // descriptor edited after sealing
      default: break;                 // valid
    }

    const auto before_a = snapshot(a), before_b = snapshot(b);
    const auto r = negotiate(a, b, g, cycle, lm, key, deny);
    if (r.committed) {
      ++commits;
      a.begin_cycle(cycle + 1);
      b.begin_cycle(cycle + 1);
      if (a.active_gene_id() != g.gene_id || b.active_gene_id() != a.active_gene_id()) ++consensus;
    } else {
      ++aborts;
      if (!(snapshot(a) == before_a) || !(snapshot(b) == before_b)) ++abort_safety;
      a.begin_cycle(cycle + 1);
      b.begin_cycle(cycle + 1);
    }
    if (carries_denied(a.active_gene(), deny) || carries_denied(b.active_gene(), deny)) ++guardrail;
  }

  // Randomized full scenarios, checked through their per-cycle traces.
  int atomicity = 0, melt_safety = 0, scenarios = 0, melts = 0, scenario_commits = 0;
  for (int s = 0; s < 200; ++s) {
    ScenarioConfig cfg;
    cfg.seed = rng.next_u64();
    cfg.total_cycles = 300 + static_cast<std::int64_t>(rng.below(500));
    cfg.mode = rng.bernoulli(0.2) ? FaultMode::deterministic : FaultMode::stochastic;
    cfg.base.alpha = rng.uniform(0.5, 5.0);
    cfg.shock_enabled = rng.bernoulli(0.7);
    cfg.shock.shock_cycle = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cfg.total_cycles - 1)));
    cfg.shock.params.origin_cycle = cfg.shock.shock_cycle;
    cfg.shock.invalidate_fraction = rng.uniform();
    cfg.synth.malicious_probability = rng.uniform(0.0, 0.9);
    cfg.synth.max_retries = static_cast<int>(rng.below(4));
    cfg.synth.default_quota = rng.bernoulli(0.5) ? 5 + rng.below(100) : 1'000'000;
    cfg.quota_window = 10 + static_cast<std::int64_t>(rng.below(200));
    cfg.message_load = 1 + rng.below(3);
    cfg.pool_capacity = 1 + rng.below(16);
    const auto run = run_scenario(cfg);
    ++scenarios;

    std::int64_t last_activation = 0;
    for (std::size_t i = 0; i < run.traces.size(); ++i) {
      const auto& tr = run.traces[i];
      const auto& rec = run.log.records[i];
      if (tr.initiator_begin != tr.initiator_end || tr.responder_begin != tr.responder_end) ++atomicity;
      if (tr.initiator_begin != tr.responder_begin || tr.initiator_after != tr.responder_after) ++consensus;
      if (tr.negotiation && tr.negotiation->committed) {
        ++scenario_commits;
        if (tr.negotiation->activation_cycle != rec.cycle + 1 || tr.negotiation->activation_cycle <= last_activation)
          ++atomicity;
        last_activation = tr.negotiation->activation_cycle;
      }
      if (tr.negotiation && !tr.negotiation->committed && tr.initiator_end != tr.initiator_begin) ++abort_safety;
      if (rec.has_event(tag::melt)) {
        ++melts;
        if (tr.initiator_after != 0 || tr.responder_after != 0) ++melt_safety;
        if (i + 1 < run.traces.size() &&
            (run.traces[i + 1].initiator_begin != 0 || run.traces[i + 1].responder_begin != 0))
          ++melt_safety;
      }
      for (std::uint64_t id : {tr.initiator_begin, tr.responder_begin, tr.initiator_after, tr.responder_after}) {
        if (carries_denied(run.initiator_genes.at(id), cfg.policy) ||
            carries_denied(run.responder_genes.at(id), cfg.policy))
          ++guardrail;
      }
    }
  }

  v.pass = !consensus && !abort_safety && !atomicity && !melt_safety && !guardrail && commits > 0 && aborts > 0 &&
           melts > 0;
  v.detail = fmt("%d negotiation trials (%d commits, %d aborts) + %d scenarios (%d commits, %d melts); violations: "
                 "consensus %d, abort safety %d, atomicity %d, melt safety %d, guardrail %d",
                 trials, commits, aborts, scenarios, scenario_commits, melts, consensus, abort_safety, atomicity,
                 melt_safety, guardrail);
  return v;
}

Verdict determinism() {
  Verdict v;
  ScenarioConfig cfg;
  const auto h1 = fnv1a64(event_log_to_csv(run_scenario(cfg).log));
  const auto h2 = fnv1a64(event_log_to_csv(run_scenario(cfg).log));
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 16; ++s) seeds.push_back(s);
  const auto serial = run_batch(cfg, seeds, 1);
  const auto parallel = run_batch(cfg, seeds, 4);
  int diffs = 0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    ScenarioConfig one = cfg;
    one.seed = seeds[i];
    const auto single = fnv1a64(event_log_to_csv(run_scenario(one).log));
    diffs += single != serial[i].log_hash;
    diffs += single != parallel[i].log_hash;
  }
  diffs += serial[0].log_hash != h1;
  v.pass = h1 == h2 && diffs == 0;
  v.detail = fmt("repeat-run hash %s/%s; single vs batch(1 thread, 4 threads) hash mismatches over %zu seeds: %d",
                 to_hex16(h1).c_str(), to_hex16(h2).c_str(), seeds.size(), diffs);
  return v;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "Duane linearity", duane_linearity},   {2, "MLE recovery", mle_recovery},
      {3, "PSI convergence", psi_convergence},   {4, "Anti-fragility", anti_fragility},
      {5, "Latency collapse", latency_collapse}, {6, "Mismatch recount oracle", recount_oracle},
      {7, "Protocol machine", protocol_machine}, {8, "Determinism", determinism},
  };

  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (only && (only < 1 || only > static_cast<int>(all.size()))) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }

  int failures = 0;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = v.budget_s == 0.0 || secs < v.budget_s;
    const bool pass = v.pass && in_time;
    failures += !pass;
    std::printf("criterion %d %s: %s | %s | %.2f s%s\n", c.id, pass ? "PASS" : "FAIL", c.name, v.detail.c_str(),
                secs, in_time ? "" : fmt(" (budget %.0f s exceeded)", v.budget_s).c_str());
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}
