#include <gtest/gtest.h>

#include <darwinnet/darwinnet.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <unistd.h>

namespace {

std::string config_path(const char* name) { return std::string(DARWINNET_CONFIG_DIR) + "/" + name; }

std::string temp_path(const char* stem) {
  return "/tmp/dn_capi_" + std::to_string(::getpid()) + "_" + stem;
}

struct ConfigHandle {
  dn_config* p = nullptr;
  ~ConfigHandle() { dn_config_free(p); }
};
struct RunHandle {
  dn_run* p = nullptr;
  ~RunHandle() { dn_run_free(p); }
};
struct ReportHandle {
  dn_report* p = nullptr;
  ~ReportHandle() { dn_report_free(p); }
};

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(dn_version(), "0.1.0");
  EXPECT_EQ(dn_schema_version(), 1);
  EXPECT_STREQ(dn_status_name(DN_OK), "ok");
  EXPECT_STRNE(dn_status_name(DN_ERR_PARSE), dn_status_name(DN_ERR_CONFIG));
}

TEST(CApi, NullArgumentsAreRejected) {
  EXPECT_EQ(dn_config_default(nullptr), DN_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(dn_run_scenario(nullptr, nullptr), DN_ERR_INVALID_ARGUMENT);
  EXPECT_STRNE(dn_last_error(), "");
  dn_config_free(nullptr);
  dn_run_free(nullptr);
  dn_report_free(nullptr);
  dn_string_free(nullptr);
}

TEST(CApi, ConfigErrorNamesKey) {
  ConfigHandle cfg;
  EXPECT_EQ(dn_config_parse(R"({"fault": {"beta": -1}})", &cfg.p), DN_ERR_CONFIG);
  EXPECT_EQ(cfg.p, nullptr);
  EXPECT_STREQ(dn_last_error_key(), "fault.beta");
  EXPECT_NE(std::string(dn_last_error()).find("fault.beta"), std::string::npos);

  EXPECT_EQ(dn_config_load("/nonexistent.json", &cfg.p), DN_ERR_IO);
  EXPECT_STREQ(dn_last_error_key(), "");
}

TEST(CApi, ConfigAccessors) {
  ConfigHandle cfg;
  ASSERT_EQ(dn_config_default(&cfg.p), DN_OK);
  EXPECT_EQ(dn_config_seed(cfg.p), 1u);
  EXPECT_EQ(dn_config_set_seed(cfg.p, 77), DN_OK);
  EXPECT_EQ(dn_config_seed(cfg.p), 77u);
  EXPECT_EQ(dn_config_set_mode(cfg.p, "deterministic"), DN_OK);
  EXPECT_EQ(dn_config_set_mode(cfg.p, "sideways"), DN_ERR_CONFIG);
  char* json = nullptr;
  ASSERT_EQ(dn_config_to_json(cfg.p, &json), DN_OK);
  const std::string text = json;
  dn_string_free(json);
  EXPECT_NE(text.find("\"deterministic\""), std::string::npos);
  EXPECT_NE(text.find("77"), std::string::npos);
}

TEST(CApi, RunAnalyzeAndWrite) {
  ConfigHandle cfg;
  ASSERT_EQ(dn_config_load(config_path("default.json").c_str(), &cfg.p), DN_OK);
  RunHandle run;
  ASSERT_EQ(dn_run_scenario(cfg.p, &run.p), DN_OK);
  EXPECT_EQ(dn_run_cycles(run.p), 2000);
  EXPECT_GT(dn_run_agent_cycles(run.p), 0);

  dn_cycle_record rec;
  ASSERT_EQ(dn_run_cycle(run.p, 1000, &rec), DN_OK);
  EXPECT_EQ(rec.cycle, 1000);
  EXPECT_EQ(dn_run_cycle(run.p, 0, &rec), DN_ERR_DOMAIN);
  EXPECT_EQ(dn_run_cycle(run.p, 2001, &rec), DN_ERR_DOMAIN);

  const auto log_path = temp_path("log.csv"), ev_path = temp_path("events.csv");
  std::uint64_t h = 0, file_h = 0;
  ASSERT_EQ(dn_run_write_log_csv(run.p, log_path.c_str(), &h), DN_OK);
  ASSERT_EQ(dn_hash_file(log_path.c_str(), &file_h), DN_OK);
  EXPECT_EQ(h, file_h);
  EXPECT_EQ(h, dn_run_log_hash(run.p));
  ASSERT_EQ(dn_run_write_events_csv(run.p, ev_path.c_str(), nullptr), DN_OK);

  RunHandle loaded;
  ASSERT_EQ(dn_run_load(log_path.c_str(), ev_path.c_str(), 50, &loaded.p), DN_OK);
  EXPECT_EQ(dn_run_log_hash(loaded.p), h);

  dn_analysis_options opts;
  dn_analysis_options_init(&opts);
  EXPECT_EQ(opts.psi_threshold, 0.9);
  EXPECT_EQ(opts.tail_windows, 4);
  ReportHandle a, b;
  ASSERT_EQ(dn_analyze(run.p, &opts, &a.p), DN_OK);
  ASSERT_EQ(dn_analyze(loaded.p, &opts, &b.p), DN_OK);
  dn_headline ha, hb;
  ASSERT_EQ(dn_report_headline(a.p, &ha), DN_OK);
  ASSERT_EQ(dn_report_headline(b.p, &hb), DN_OK);
  EXPECT_GT(ha.beta_hat, 0.0);
  EXPECT_EQ(ha.has_recovery, 1);
  // Event times round-trip at 6 decimals, so the fits agree closely.
  EXPECT_NEAR(ha.beta_hat, hb.beta_hat, 1e-6);
  EXPECT_EQ(ha.dip_depth, hb.dip_depth);
  EXPECT_EQ(ha.recovery_time, hb.recovery_time);

  EXPECT_EQ(dn_report_write_json(a.p, temp_path("report.json").c_str(), nullptr), DN_OK);
  EXPECT_EQ(dn_report_write_duane_csv(a.p, temp_path("duane.csv").c_str(), nullptr), DN_OK);
  EXPECT_EQ(dn_run_write_log_csv(run.p, "/nonexistent/dir/log.csv", nullptr), DN_ERR_IO);
  for (const char* stem : {"log.csv", "events.csv", "report.json", "duane.csv"}) std::remove(temp_path(stem).c_str());
}

TEST(CApi, LoadReportsParseRow) {
  const auto path = temp_path("bad.csv");
  ASSERT_EQ(dn_write_text(path.c_str(),
                          "cycle,path,latency_ms,mismatches,agent,active_gene_id,psi_cum,psi_win,events\n"
                          "1,fast,1.000,0,0,0,1.000000,1.000000,\n"
                          "2,fast,oops,0,0,0,1.000000,1.000000,\n",
                          nullptr),
            DN_OK);
  RunHandle run;
  EXPECT_EQ(dn_run_load(path.c_str(), nullptr, 50, &run.p), DN_ERR_PARSE);
  EXPECT_EQ(dn_last_error_row(), 3);
  std::remove(path.c_str());
}

TEST(CApi, ShortLogIsInsufficientData) {
  ConfigHandle cfg;
  ASSERT_EQ(dn_config_parse(R"({"sim": {"total_cycles": 100}, "shock": {"enabled": false}})", &cfg.p), DN_OK);
  RunHandle run;
  ASSERT_EQ(dn_run_scenario(cfg.p, &run.p), DN_OK);
  dn_analysis_options opts;
  dn_analysis_options_init(&opts);
  ReportHandle rep;
  EXPECT_EQ(dn_analyze(run.p, &opts, &rep.p), DN_ERR_INSUFFICIENT_DATA);
}

TEST(CApi, BatchMatchesSingleRuns) {
  ConfigHandle cfg;
  ASSERT_EQ(dn_config_default(&cfg.p), DN_OK);
  const std::uint64_t seeds[] = {3, 4, 3};
  dn_batch_row rows[3];
  ASSERT_EQ(dn_batch(cfg.p, seeds, 3, 2, rows), DN_OK);
  EXPECT_EQ(rows[0].log_hash, rows[2].log_hash);
  EXPECT_NE(rows[0].log_hash, rows[1].log_hash);
  ASSERT_EQ(dn_config_set_seed(cfg.p, 4), DN_OK);
  RunHandle single;
  ASSERT_EQ(dn_run_scenario(cfg.p, &single.p), DN_OK);
  EXPECT_EQ(dn_run_log_hash(single.p), rows[1].log_hash);
  EXPECT_EQ(dn_run_agent_cycles(single.p), rows[1].total_agent_cycles);
  EXPECT_FALSE(std::isnan(rows[1].dip_depth));

  const auto path = temp_path("batch.csv");
  ASSERT_EQ(dn_batch_write_csv(rows, 3, path.c_str(), nullptr), DN_OK);
  std::remove(path.c_str());
}
