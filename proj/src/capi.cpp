#include "darwinnet/darwinnet.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <string>

#include "analysis.hpp"
#include "batch.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "event_log.hpp"
#include "harness.hpp"
#include "hash.hpp"

using namespace darwinnet;

struct dn_config {
  ScenarioConfig cfg;
};

struct dn_run {
  EventLog log;
  EventStream events;
  bool has_events = false;
  std::map<std::uint64_t, ProtocolGene> genes;
  std::string log_csv;
};

struct dn_report {
  analysis::AnalysisReport report;
};

namespace {

struct LastError {
  std::string message;
  std::string key;
  std::int64_t row = 0;
};

thread_local LastError last_error;

dn_status fail(dn_status status, std::string message, std::string key = {}, std::int64_t row = 0) {
  last_error = {std::move(message), std::move(key), row};
  return status;
}

template <class F>
dn_status guarded(F&& body) {
  try {
    body();
    return DN_OK;
  } catch (const ConfigError& e) {
    return fail(DN_ERR_CONFIG, e.what(), e.key());
  } catch (const ParseError& e) {
    return fail(DN_ERR_PARSE, e.what(), {}, static_cast<std::int64_t>(e.row()));
  } catch (const InsufficientDataError& e) {
    return fail(DN_ERR_INSUFFICIENT_DATA, e.what());
  } catch (const IoError& e) {
    return fail(DN_ERR_IO, e.what());
  } catch (const DomainError& e) {
    return fail(DN_ERR_DOMAIN, e.what());
  } catch (const RangeError& e) {
    return fail(DN_ERR_DOMAIN, e.what());
  } catch (const SchedulingError& e) {
    return fail(DN_ERR_DOMAIN, e.what());
  } catch (const std::exception& e) {
    return fail(DN_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DN_ERR_INTERNAL, "unknown error");
  }
}

#define DN_REQUIRE(cond, what) \
  if (!(cond)) return fail(DN_ERR_INVALID_ARGUMENT, what)

dn_status write_hashed(const char* path, const std::string& text, uint64_t* out_hash) {
  DN_REQUIRE(path, "path is null");
  return guarded([&] {
    write_file(path, text);
    if (out_hash) *out_hash = fnv1a64(text);
  });
}

}  // namespace

extern "C" {

const char* dn_version(void) { return DARWINNET_VERSION; }
int dn_schema_version(void) { return event_log_schema_version; }

const char* dn_status_name(dn_status status) {
  switch (status) {
    case DN_OK: return "ok";
    case DN_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case DN_ERR_CONFIG: return "config";
    case DN_ERR_PARSE: return "parse";
    case DN_ERR_INSUFFICIENT_DATA: return "insufficient_data";
    case DN_ERR_IO: return "io";
    case DN_ERR_DOMAIN: return "domain";
    case DN_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* dn_last_error(void) { return last_error.message.c_str(); }
const char* dn_last_error_key(void) { return last_error.key.c_str(); }
int64_t dn_last_error_row(void) { return last_error.row; }

void dn_string_free(char* s) { delete[] s; }

dn_status dn_config_default(dn_config** out) {
  DN_REQUIRE(out, "out is null");
  return guarded([&] { *out = new dn_config{}; });
}

dn_status dn_config_parse(const char* json_text, dn_config** out) {
  DN_REQUIRE(json_text && out, "null argument");
  return guarded([&] { *out = new dn_config{config_from_json(json_text)}; });
}

dn_status dn_config_load(const char* path, dn_config** out) {
  DN_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new dn_config{load_config(path)}; });
}

dn_status dn_config_set_seed(dn_config* cfg, uint64_t seed) {
  DN_REQUIRE(cfg, "config is null");
  cfg->cfg.seed = seed;
  return DN_OK;
}

dn_status dn_config_set_mode(dn_config* cfg, const char* mode) {
  DN_REQUIRE(cfg && mode, "null argument");
  return guarded([&] {
    try {
      cfg->cfg.mode = fault_mode_from_string(mode);
    } catch (const DomainError& e) {
      throw ConfigError("fault.mode", e.what());
    }
  });
}

uint64_t dn_config_seed(const dn_config* cfg) { return cfg ? cfg->cfg.seed : 0; }

dn_status dn_config_to_json(const dn_config* cfg, char** out_json) {
  DN_REQUIRE(cfg && out_json, "null argument");
  return guarded([&] {
    const std::string text = config_to_json(cfg->cfg);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out_json = buf;
  });
}

void dn_config_free(dn_config* cfg) { delete cfg; }

dn_status dn_run_scenario(const dn_config* cfg, dn_run** out) {
  DN_REQUIRE(cfg && out, "null argument");
  return guarded([&] {
    ScenarioRun run = run_scenario(cfg->cfg);
    auto* r = new dn_run{};
    r->log_csv = event_log_to_csv(run.log);
    r->log = std::move(run.log);
    r->events = std::move(run.events);
    r->has_events = true;
    r->genes = std::move(run.initiator_genes);
    *out = r;
  });
}

dn_status dn_run_load(const char* log_csv_path, const char* events_csv_path, int64_t psi_window, dn_run** out) {
  DN_REQUIRE(log_csv_path && out, "null argument");
  DN_REQUIRE(psi_window >= 1, "psi_window must be >= 1");
  return guarded([&] {
    auto r = std::make_unique<dn_run>();
    r->log_csv = read_file(log_csv_path);
    r->log = event_log_from_csv(r->log_csv, psi_window);
    if (events_csv_path) {
      r->events = events_from_csv(read_file(events_csv_path));
      r->has_events = true;
    }
    *out = r.release();
  });
}

int64_t dn_run_cycles(const dn_run* run) { return run ? run->log.total_cycles() : 0; }

int64_t dn_run_agent_cycles(const dn_run* run) {
  if (!run) return 0;
  int64_t n = 0;
  for (const auto& r : run->log.records) n += r.agent ? 1 : 0;
  return n;
}

dn_status dn_run_cycle(const dn_run* run, int64_t cycle, dn_cycle_record* out) {
  DN_REQUIRE(run && out, "null argument");
  if (cycle < 1 || cycle > run->log.total_cycles()) return fail(DN_ERR_DOMAIN, "cycle out of range");
  const CycleRecord& r = run->log.at_cycle(cycle);
  *out = {r.cycle,   to_string(r.path).data(), r.latency_ms, r.mismatches, r.agent ? 1 : 0,
          r.active_gene_id, r.psi_cum, r.psi_win};
  return DN_OK;
}

uint64_t dn_run_log_hash(const dn_run* run) { return run ? fnv1a64(run->log_csv) : 0; }

dn_status dn_run_write_log_csv(const dn_run* run, const char* path, uint64_t* out_hash) {
  DN_REQUIRE(run, "run is null");
  return write_hashed(path, run->log_csv, out_hash);
}

dn_status dn_run_write_events_csv(const dn_run* run, const char* path, uint64_t* out_hash) {
  DN_REQUIRE(run, "run is null");
  if (!run->has_events) return fail(DN_ERR_INVALID_ARGUMENT, "run carries no event stream");
  return write_hashed(path, events_to_csv(run->events), out_hash);
}

dn_status dn_run_write_genes_csv(const dn_run* run, const char* path, uint64_t* out_hash) {
  DN_REQUIRE(run, "run is null");
  return write_hashed(path, gene_table_to_csv(run->genes), out_hash);
}

void dn_run_free(dn_run* run) { delete run; }

void dn_analysis_options_init(dn_analysis_options* options) {
  if (!options) return;
  const analysis::AnalysisOptions d;
  *options = {d.psi_threshold, d.tail_windows, d.epsilon, d.shock_cycle, d.cycle_indexed ? 1 : 0};
}

dn_status dn_analyze(const dn_run* run, const dn_analysis_options* options, dn_report** out) {
  DN_REQUIRE(run && out, "null argument");
  return guarded([&] {
    analysis::AnalysisOptions opts;
    if (options) {
      opts.psi_threshold = options->psi_threshold;
      opts.tail_windows = options->tail_windows;
      opts.epsilon = options->epsilon;
      opts.shock_cycle = options->shock_cycle;
      opts.cycle_indexed = options->cycle_indexed != 0;
    }
    auto report = analysis::analyze(run->log, run->has_events ? &run->events : nullptr, opts);
    *out = new dn_report{std::move(report)};
  });
}

dn_status dn_report_headline(const dn_report* report, dn_headline* out) {
  DN_REQUIRE(report && out, "null argument");
  const auto& r = report->report;
  *out = {};
  out->alpha_hat = r.fit.alpha_hat;
  out->beta_hat = r.fit.beta_hat;
  out->duane_slope = r.fit.duane_slope;
  out->duane_intercept = r.fit.duane_intercept;
  out->duane_r_squared = r.fit.duane_r_squared;
  out->n_events = static_cast<int64_t>(r.fit.n_events);
  out->has_recovery = r.recovery ? 1 : 0;
  out->dip_depth = r.recovery ? r.recovery->dip_depth : std::numeric_limits<double>::quiet_NaN();
  out->dip_cycle = r.recovery ? r.recovery->dip_cycle : -1;
  out->recovery_time = r.recovery && r.recovery->recovery_time ? *r.recovery->recovery_time : -1;
  out->equilibrium = r.convergence.equilibrium ? 1 : 0;
  out->last_subthreshold_cycle = r.convergence.last_subthreshold_cycle.value_or(-1);
  return DN_OK;
}

dn_status dn_report_write_json(const dn_report* report, const char* path, uint64_t* out_hash) {
  DN_REQUIRE(report, "report is null");
  return write_hashed(path, analysis::report_to_json(report->report) + "\n", out_hash);
}

dn_status dn_report_write_duane_csv(const dn_report* report, const char* path, uint64_t* out_hash) {
  DN_REQUIRE(report, "report is null");
  return write_hashed(path, analysis::duane_points_to_csv(report->report.fit.points), out_hash);
}

void dn_report_free(dn_report* report) { delete report; }

dn_status dn_batch(const dn_config* cfg, const uint64_t* seeds, size_t n_seeds, unsigned threads,
                   dn_batch_row* rows_out) {
  DN_REQUIRE(cfg && (n_seeds == 0 || (seeds && rows_out)), "null argument");
  return guarded([&] {
    const auto rows = run_batch(cfg->cfg, {seeds, n_seeds}, threads);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (size_t i = 0; i < rows.size(); ++i) {
      const BatchRow& r = rows[i];
      rows_out[i] = {r.seed,
                     r.total_agent_cycles,
                     r.beta_hat.value_or(nan),
                     r.dip_depth.value_or(nan),
                     r.recovery_time.value_or(-1),
                     r.final_psi_win,
                     r.log_hash};
    }
  });
}

dn_status dn_batch_write_csv(const dn_batch_row* rows, size_t n_rows, const char* path, uint64_t* out_hash) {
  DN_REQUIRE(rows || n_rows == 0, "rows is null");
  std::vector<BatchRow> converted;
  converted.reserve(n_rows);
  for (size_t i = 0; i < n_rows; ++i) {
    const dn_batch_row& r = rows[i];
    BatchRow b;
    b.seed = r.seed;
    b.total_agent_cycles = r.total_agent_cycles;
    if (!std::isnan(r.beta_hat)) b.beta_hat = r.beta_hat;
    if (!std::isnan(r.dip_depth)) b.dip_depth = r.dip_depth;
    if (r.recovery_time >= 0) b.recovery_time = r.recovery_time;
    b.final_psi_win = r.final_psi_win;
    b.log_hash = r.log_hash;
    converted.push_back(b);
  }
  return write_hashed(path, batch_to_csv(converted), out_hash);
}

dn_status dn_hash_file(const char* path, uint64_t* out_hash) {
  DN_REQUIRE(path && out_hash, "null argument");
  return guarded([&] { *out_hash = fnv1a64(read_file(path)); });
}

dn_status dn_write_text(const char* path, const char* text, uint64_t* out_hash) {
  DN_REQUIRE(text, "text is null");
  return write_hashed(path, text, out_hash);
}

}  // extern "C"
