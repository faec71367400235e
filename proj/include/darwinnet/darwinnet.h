/*
 * darwinnet: C interface to the evolutionary-protocol simulator.
 *
 * Objects are opaque handles created by dn_*_create/load/parse functions and
 * released by the matching dn_*_free. Every fallible call returns a
 * dn_status; on failure dn_last_error() describes the problem for the
 * calling thread until its next failing call.
 */
#ifndef DARWINNET_H
#define DARWINNET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DARWINNET_BUILDING)
#    define DN_API __declspec(dllexport)
#  else
#    define DN_API __declspec(dllimport)
#  endif
#else
#  define DN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dn_status {
  DN_OK = 0,
  DN_ERR_INVALID_ARGUMENT = 1,
  DN_ERR_CONFIG = 2,
  DN_ERR_PARSE = 3,
  DN_ERR_INSUFFICIENT_DATA = 4,
  DN_ERR_IO = 5,
  DN_ERR_DOMAIN = 6,
  DN_ERR_INTERNAL = 7
} dn_status;

typedef struct dn_config dn_config;
typedef struct dn_run dn_run;
typedef struct dn_report dn_report;

DN_API const char* dn_version(void);
DN_API int dn_schema_version(void);
DN_API const char* dn_status_name(dn_status status);

/* Thread-local details of the last failure. */
DN_API const char* dn_last_error(void);
/* Dotted config key path for DN_ERR_CONFIG, "" otherwise. */
DN_API const char* dn_last_error_key(void);
/* 1-based row for DN_ERR_PARSE, 0 otherwise. */
DN_API int64_t dn_last_error_row(void);

DN_API void dn_string_free(char* s);

/* ---- scenario configuration ------------------------------------------ */

DN_API dn_status dn_config_default(dn_config** out);
DN_API dn_status dn_config_parse(const char* json_text, dn_config** out);
DN_API dn_status dn_config_load(const char* path, dn_config** out);
DN_API dn_status dn_config_set_seed(dn_config* cfg, uint64_t seed);
/* mode: "stochastic" or "deterministic" */
DN_API dn_status dn_config_set_mode(dn_config* cfg, const char* mode);
DN_API uint64_t dn_config_seed(const dn_config* cfg);
/* Full key tree as JSON; release with dn_string_free. */
DN_API dn_status dn_config_to_json(const dn_config* cfg, char** out_json);
DN_API void dn_config_free(dn_config* cfg);

/* ---- scenario runs ---------------------------------------------------- */

typedef struct dn_cycle_record {
  int64_t cycle;
  const char* path; /* "fast" | "slow_synth" | "slow_pool" | "fallback"; static storage */
  double latency_ms;
  int32_t mismatches;
  int32_t agent;
  uint64_t active_gene_id;
  double psi_cum;
  double psi_win;
} dn_cycle_record;

DN_API dn_status dn_run_scenario(const dn_config* cfg, dn_run** out);
/* Loads an event-log CSV, optionally with its event-times CSV (may be NULL). */
DN_API dn_status dn_run_load(const char* log_csv_path, const char* events_csv_path, int64_t psi_window,
                             dn_run** out);
DN_API int64_t dn_run_cycles(const dn_run* run);
DN_API int64_t dn_run_agent_cycles(const dn_run* run);
DN_API dn_status dn_run_cycle(const dn_run* run, int64_t cycle, dn_cycle_record* out);
/* FNV-1a 64 of the event-log CSV text. */
DN_API uint64_t dn_run_log_hash(const dn_run* run);
/* Writers; out_hash (nullable) receives FNV-1a 64 of the bytes written. */
DN_API dn_status dn_run_write_log_csv(const dn_run* run, const char* path, uint64_t* out_hash);
DN_API dn_status dn_run_write_events_csv(const dn_run* run, const char* path, uint64_t* out_hash);
DN_API dn_status dn_run_write_genes_csv(const dn_run* run, const char* path, uint64_t* out_hash);
DN_API void dn_run_free(dn_run* run);

/* ---- analysis --------------------------------------------------------- */

typedef struct dn_analysis_options {
  double psi_threshold;  /* default 0.9 */
  int64_t tail_windows;  /* default 4 */
  double epsilon;        /* default 0.02 */
  int64_t shock_cycle;   /* -1 detect from SHOCK tag (default), 0 none */
  int32_t cycle_indexed; /* nonzero: Duane points from agent-cycle indices */
} dn_analysis_options;

typedef struct dn_headline {
  double alpha_hat;
  double beta_hat;
  double duane_slope;
  double duane_intercept;
  double duane_r_squared;
  int64_t n_events;
  int32_t has_recovery;
  double dip_depth;
  int64_t dip_cycle;
  int64_t recovery_time; /* -1 when the series never recovers */
  int32_t equilibrium;
  int64_t last_subthreshold_cycle; /* -1 when none */
} dn_headline;

DN_API void dn_analysis_options_init(dn_analysis_options* options);
DN_API dn_status dn_analyze(const dn_run* run, const dn_analysis_options* options, dn_report** out);
DN_API dn_status dn_report_headline(const dn_report* report, dn_headline* out);
DN_API dn_status dn_report_write_json(const dn_report* report, const char* path, uint64_t* out_hash);
DN_API dn_status dn_report_write_duane_csv(const dn_report* report, const char* path, uint64_t* out_hash);
DN_API void dn_report_free(dn_report* report);

/* ---- batches ---------------------------------------------------------- */

typedef struct dn_batch_row {
  uint64_t seed;
  int64_t total_agent_cycles;
  double beta_hat;       /* NaN when not estimable */
  double dip_depth;      /* NaN without a shock */
  int64_t recovery_time; /* -1 when absent */
  double final_psi_win;
  uint64_t log_hash;
} dn_batch_row;

/* rows_out must hold n_seeds rows; row i belongs to seeds[i]. */
DN_API dn_status dn_batch(const dn_config* cfg, const uint64_t* seeds, size_t n_seeds, unsigned threads,
                          dn_batch_row* rows_out);
DN_API dn_status dn_batch_write_csv(const dn_batch_row* rows, size_t n_rows, const char* path,
                                    uint64_t* out_hash);

/* ---- files ------------------------------------------------------------ */

DN_API dn_status dn_hash_file(const char* path, uint64_t* out_hash);
DN_API dn_status dn_write_text(const char* path, const char* text, uint64_t* out_hash);

#ifdef __cplusplus
}
#endif

#endif /* DARWINNET_H */
