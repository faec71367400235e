#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "event_log.hpp"
#include "fault_process.hpp"

namespace darwinnet::analysis {

struct DuanePoint {
  double t;
  double rate;  // cumulative failure rate i / t_i
};

// (t_i, i / t_i) for the i-th event. Times must be strictly increasing.
std::vector<DuanePoint> duane_points(std::span<const double> event_times);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;  // log10 units
  double r_squared = 1.0;
  std::size_t n = 0;
};

// Ordinary least squares of log10(rate) on log10(t).
LineFit loglog_regression(std::span<const DuanePoint> points);

struct PowerLawEstimate {
  double alpha;
  double beta;
};

// Time-truncated Crow-AMSAA maximum likelihood:
//   beta = n / sum ln(t_end / t_i),  alpha = n / t_end^beta.
// Needs n >= 2 and every t_i < t_end.
PowerLawEstimate mle_fit(std::span<const double> event_times, double t_end);

struct FitReport {
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double duane_slope = 0.0;
  double duane_intercept = 0.0;
  double duane_r_squared = 0.0;
  std::size_t n_events = 0;
  double t_end = 0.0;
  std::pair<double, double> fit_segment{0.0, 0.0};
  std::vector<DuanePoint> points;
};

// Fits the events strictly inside (t_start, t_end).
FitReport fit_growth(std::span<const double> event_times, double t_start, double t_end);

struct ConvergenceReport {
  bool equilibrium = false;
  double psi_threshold = 0.0;
  std::int64_t tail_cycles = 0;
  std::optional<std::int64_t> last_subthreshold_cycle;
};

// Equilibrium iff psi_win >= threshold over the final tail_windows * W cycles.
ConvergenceReport convergence_report(const EventLog& log, double psi_threshold, std::int64_t tail_windows);

struct RecoveryReport {
  std::int64_t shock_cycle = 0;
  double pre_shock_psi_mean = 0.0;
  double dip_min = 0.0;
  std::int64_t dip_cycle = 0;
  std::optional<std::int64_t> recovery_cycle;
  std::optional<std::int64_t> recovery_time;
  double dip_depth = 0.0;
};

RecoveryReport recovery_metrics(const EventLog& log, std::int64_t shock_cycle, double epsilon = 0.02);

struct AnalysisOptions {
  double psi_threshold = 0.9;
  std::int64_t tail_windows = 4;
  double epsilon = 0.02;
  std::int64_t shock_cycle = -1;  // -1: detect from the SHOCK tag, 0: none
  bool cycle_indexed = false;     // Duane points from agent-cycle indices
};

struct AnalysisReport {
  FitReport fit;
  std::optional<RecoveryReport> recovery;
  ConvergenceReport convergence;
};

// Full report for one log. `events` supplies continuous event times; when it
// is null (or cycle_indexed is set) agent-cycle indices stand in for them.
AnalysisReport analyze(const EventLog& log, const EventStream* events, const AnalysisOptions& options);

std::string report_to_json(const AnalysisReport& report, int indent = 2);
std::string duane_points_to_csv(std::span<const DuanePoint> points);

}  // namespace darwinnet::analysis
