#include "batch.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "analysis.hpp"
#include "errors.hpp"
#include "event_log.hpp"
#include "harness.hpp"
#include "hash.hpp"

namespace darwinnet {

BatchRow summarize_run(const ScenarioConfig& cfg, double epsilon) {
  const ScenarioRun run = run_scenario(cfg);
  BatchRow row;
  row.seed = cfg.seed;
  for (const auto& r : run.log.records) row.total_agent_cycles += r.agent ? 1 : 0;
  row.final_psi_win = run.log.records.back().psi_win;
  row.log_hash = fnv1a64(event_log_to_csv(run.log));

  const std::int64_t shock = cfg.shock_enabled ? cfg.shock.shock_cycle : 0;
  const double segment_end = static_cast<double>(shock > 0 ? shock : cfg.total_cycles);
  try {
    row.beta_hat = analysis::fit_growth(run.events.times(), 0.0, segment_end).beta_hat;
  } catch (const InsufficientDataError&) {
  }
  if (shock > 0) {
    const auto rec = analysis::recovery_metrics(run.log, shock, epsilon);
    row.dip_depth = rec.dip_depth;
    row.recovery_time = rec.recovery_time;
  }
  return row;
}

std::vector<BatchRow> run_batch(const ScenarioConfig& cfg, std::span<const std::uint64_t> seeds,
                                unsigned threads) {
  cfg.validate();
  std::vector<BatchRow> rows(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        ScenarioConfig local = cfg;
        local.seed = seeds[i];
        rows[i] = summarize_run(local);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const unsigned n = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(seeds.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::string batch_to_csv(const std::vector<BatchRow>& rows) {
  std::string out = "seed,total_agent_cycles,beta_hat,dip_depth,recovery_time,final_psi_win\n";
  for (const auto& r : rows) {
    out += std::to_string(r.seed) + ',' + std::to_string(r.total_agent_cycles) + ',';
    out += (r.beta_hat ? format_fixed(*r.beta_hat, 6) : std::string()) + ',';
    out += (r.dip_depth ? format_fixed(*r.dip_depth, 6) : std::string()) + ',';
    out += (r.recovery_time ? std::to_string(*r.recovery_time) : std::string()) + ',';
    out += format_fixed(r.final_psi_win, 6) + '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace darwinnet
