// darwinnet command-line driver: run scenarios, analyze logs, batch seeds.
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "darwinnet/darwinnet.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Exit-code contract.
enum Exit : int {
  exit_ok = 0,
  exit_other = 1,
  exit_config = 2,
  exit_parse = 3,
  exit_insufficient_data = 4,
  exit_io = 5,
};

int exit_code(dn_status s) {
  switch (s) {
    case DN_OK: return exit_ok;
    case DN_ERR_CONFIG: return exit_config;
    case DN_ERR_PARSE: return exit_parse;
    case DN_ERR_INSUFFICIENT_DATA: return exit_insufficient_data;
    case DN_ERR_IO: return exit_io;
    default: return exit_other;
  }
}

struct Failure {
  int code;
};

void check(dn_status s, const char* context) {
  if (s == DN_OK) return;
  std::string msg = std::string("darwinnet: ") + context + ": " + dn_last_error();
  if (s == DN_ERR_CONFIG && *dn_last_error_key()) msg += " [key " + std::string(dn_last_error_key()) + "]";
  std::cerr << msg << "\n";
  throw Failure{exit_code(s)};
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    std::cerr << "darwinnet: cannot create output directory '" << dir << "'\n";
    throw Failure{exit_io};
  }
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  ~Handle() { Free(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using Config = Handle<dn_config, dn_config_free>;
using Run = Handle<dn_run, dn_run_free>;
using Report = Handle<dn_report, dn_report_free>;

struct ConfigOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
};

void load_config(const ConfigOptions& o, Config& cfg) {
  check(dn_config_load(o.config_path.c_str(), cfg.out()), "loading config");
  if (o.seed) check(dn_config_set_seed(cfg.get(), *o.seed), "applying --seed");
  if (o.mode) check(dn_config_set_mode(cfg.get(), o.mode->c_str()), "applying --mode");
}

json config_echo(const Config& cfg) {
  char* text = nullptr;
  check(dn_config_to_json(cfg.get(), &text), "serializing config");
  json echo = json::parse(text);
  dn_string_free(text);
  return echo;
}

json file_entry(const fs::path& p, std::uint64_t hash) {
  return {{"path", p.filename().string()}, {"fnv1a64", hex(hash)}};
}

void write_manifest(const fs::path& path, json manifest) {
  manifest["tool"] = "darwinnet";
  manifest["tool_version"] = dn_version();
  manifest["schema_version"] = dn_schema_version();
  check(dn_write_text(path.string().c_str(), (manifest.dump(2) + "\n").c_str(), nullptr), "writing manifest");
}

int cmd_run(const ConfigOptions& co, const std::string& out_dir, bool quiet) {
  Config cfg;
  load_config(co, cfg);
  ensure_dir(out_dir);

  Run run;
  check(dn_run_scenario(cfg.get(), run.out()), "running scenario");

  const fs::path dir(out_dir);
  const fs::path log_path = dir / "event_log.csv", events_path = dir / "events.csv", genes_path = dir / "genes.csv";
  std::uint64_t log_hash = 0, events_hash = 0, genes_hash = 0;
  check(dn_run_write_log_csv(run.get(), log_path.string().c_str(), &log_hash), "writing event log");
  check(dn_run_write_events_csv(run.get(), events_path.string().c_str(), &events_hash), "writing event times");
  check(dn_run_write_genes_csv(run.get(), genes_path.string().c_str(), &genes_hash), "writing gene table");

  write_manifest(dir / "manifest.json",
                 {{"kind", "run"},
                  {"seed", dn_config_seed(cfg.get())},
                  {"config", config_echo(cfg)},
                  {"cycles", dn_run_cycles(run.get())},
                  {"agent_cycles", dn_run_agent_cycles(run.get())},
                  {"files",
                   {{"event_log", file_entry(log_path, log_hash)},
                    {"events", file_entry(events_path, events_hash)},
                    {"genes", file_entry(genes_path, genes_hash)}}}});

  if (!quiet) {
    std::cout << "cycles=" << dn_run_cycles(run.get()) << " agent_cycles=" << dn_run_agent_cycles(run.get())
              << " log_hash=" << hex(log_hash) << "\n"
              << "wrote " << log_path.string() << "\n";
  }
  return exit_ok;
}

struct AnalyzeOptions {
  std::string log_path;
  std::optional<std::string> events_path;
  std::string out_dir;
  std::int64_t window = 50;
  dn_analysis_options opts{};
};

int cmd_analyze(const AnalyzeOptions& ao, bool quiet) {
  Run run;
  check(dn_run_load(ao.log_path.c_str(), ao.events_path ? ao.events_path->c_str() : nullptr, ao.window, run.out()),
        "reading log");
  Report report;
  check(dn_analyze(run.get(), &ao.opts, report.out()), "analyzing log");
  ensure_dir(ao.out_dir);

  const fs::path dir(ao.out_dir);
  const fs::path report_path = dir / "analysis_report.json", duane_path = dir / "duane_points.csv";
  std::uint64_t report_hash = 0, duane_hash = 0, log_hash = 0;
  check(dn_report_write_json(report.get(), report_path.string().c_str(), &report_hash), "writing report");
  check(dn_report_write_duane_csv(report.get(), duane_path.string().c_str(), &duane_hash), "writing Duane points");
  check(dn_hash_file(ao.log_path.c_str(), &log_hash), "hashing log");

  json inputs = {{"event_log", file_entry(ao.log_path, log_hash)}};
  if (ao.events_path) {
    std::uint64_t h = 0;
    check(dn_hash_file(ao.events_path->c_str(), &h), "hashing event times");
    inputs["events"] = file_entry(*ao.events_path, h);
  }
  write_manifest(dir / "analysis_manifest.json",
                 {{"kind", "analysis"},
                  {"inputs", inputs},
                  {"files",
                   {{"report", file_entry(report_path, report_hash)}, {"duane_points", file_entry(duane_path, duane_hash)}}}});

  dn_headline h{};
  check(dn_report_headline(report.get(), &h), "reading report");
  if (!quiet) {
    std::printf("beta_hat=%.6f\nduane_slope=%.6f\n", h.beta_hat, h.duane_slope);
    if (h.has_recovery) {
      std::printf("dip_depth=%.6f\n", h.dip_depth);
      if (h.recovery_time >= 0)
        std::printf("recovery_time=%" PRId64 "\n", h.recovery_time);
      else
        std::printf("recovery_time=none\n");
    }
    std::printf("equilibrium=%s\n", h.equilibrium ? "equilibrium" : "not_converged");
  }
  return exit_ok;
}

std::vector<std::uint64_t> parse_seeds(const std::vector<std::string>& specs) {
  std::vector<std::uint64_t> seeds;
  for (const auto& spec : specs) {
    std::uint64_t lo = 0, hi = 0;
    char dash = 0;
    if (std::sscanf(spec.c_str(), "%" SCNu64 "%c%" SCNu64, &lo, &dash, &hi) == 3 && dash == '-' && hi >= lo) {
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    } else if (std::sscanf(spec.c_str(), "%" SCNu64, &lo) == 1 && spec.find('-') == std::string::npos) {
      seeds.push_back(lo);
    } else {
      throw CLI::ValidationError("--seeds", "bad seed spec '" + spec + "'");
    }
  }
  return seeds;
}

int cmd_batch(const ConfigOptions& co, const std::vector<std::string>& seed_specs, const std::string& out_dir,
              unsigned threads, bool quiet) {
  Config cfg;
  load_config(co, cfg);
  const auto seeds = parse_seeds(seed_specs);
  ensure_dir(out_dir);

  std::vector<dn_batch_row> rows(seeds.size());
  check(dn_batch(cfg.get(), seeds.data(), seeds.size(), threads, rows.data()), "running batch");

  const fs::path summary = fs::path(out_dir) / "batch_summary.csv";
  std::uint64_t hash = 0;
  check(dn_batch_write_csv(rows.data(), rows.size(), summary.string().c_str(), &hash), "writing summary");

  json logs = json::array();
  for (const auto& r : rows) logs.push_back({{"seed", r.seed}, {"event_log_fnv1a64", hex(r.log_hash)}});
  write_manifest(fs::path(out_dir) / "batch_manifest.json",
                 {{"kind", "batch"},
                  {"config", config_echo(cfg)},
                  {"seeds", seeds},
                  {"runs", logs},
                  {"files", {{"summary", file_entry(summary, hash)}}}});
  if (!quiet) std::cout << "runs=" << rows.size() << "\nwrote " << summary.string() << "\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"darwinnet: evolutionary protocol lifecycle simulator"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet", quiet, "Suppress the summary on stdout");
  app.set_version_flag("--version", dn_version());

  ConfigOptions co;
  std::string out_dir;
  auto add_config_flags = [&](CLI::App* sub) {
    sub->add_option("--config", co.config_path, "Scenario config (JSON)")->required();
    sub->add_option("--seed", co.seed, "Override sim.seed");
    sub->add_option("--mode", co.mode, "Override fault.mode")->check(CLI::IsMember({"stochastic", "deterministic"}));
    sub->add_option("--out", out_dir, "Output directory")->required();
    sub->add_flag("--quiet", quiet, "Suppress the summary on stdout");
  };

  auto* run = app.add_subcommand("run", "Run one scenario and write its event log");
  add_config_flags(run);

  AnalyzeOptions ao;
  dn_analysis_options_init(&ao.opts);
  bool cycle_indexed = false;
  auto* analyze = app.add_subcommand("analyze", "Fit reliability growth and recovery metrics for a log");
  analyze->add_option("--log", ao.log_path, "Event-log CSV")->required();
  analyze->add_option("--events", ao.events_path, "Event-times CSV (continuous Duane points)");
  analyze->add_option("--out", ao.out_dir, "Output directory")->required();
  analyze->add_option("--window", ao.window, "PSI window W the log was produced with")->capture_default_str();
  analyze->add_option("--threshold", ao.opts.psi_threshold, "Equilibrium PSI threshold")->capture_default_str();
  analyze->add_option("--tail-windows", ao.opts.tail_windows, "Windows that must stay above threshold")
      ->capture_default_str();
  analyze->add_option("--epsilon", ao.opts.epsilon, "Recovery tolerance")->capture_default_str();
  analyze->add_option("--shock-cycle", ao.opts.shock_cycle, "Shock cycle (-1 detect, 0 none)")->capture_default_str();
  analyze->add_flag("--cycle-indexed", cycle_indexed, "Duane points from agent-cycle indices");
  analyze->add_flag("--quiet", quiet, "Suppress the summary on stdout");

  std::vector<std::string> seed_specs;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  auto* batch = app.add_subcommand("batch", "Run one scenario per seed and summarize");
  batch->add_option("--config", co.config_path, "Scenario config (JSON)")->required();
  batch->add_option("--seeds", seed_specs, "Seeds: N or A-B, comma separated")->required()->delimiter(',');
  batch->add_option("--mode", co.mode, "Override fault.mode")->check(CLI::IsMember({"stochastic", "deterministic"}));
  batch->add_option("--out", out_dir, "Output directory")->required();
  batch->add_option("--threads", threads, "Worker threads")->capture_default_str();
  batch->add_flag("--quiet", quiet, "Suppress the summary on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_other;
  }

  try {
    if (*run) return cmd_run(co, out_dir, quiet);
    if (*analyze) {
      ao.opts.cycle_indexed = cycle_indexed ? 1 : 0;
      return cmd_analyze(ao, quiet);
    }
    if (*batch) return cmd_batch(co, seed_specs, out_dir, threads, quiet);
  } catch (const Failure& f) {
    return f.code;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "darwinnet: " << e.what() << "\n";
    return exit_other;
  }
  return exit_other;
}
