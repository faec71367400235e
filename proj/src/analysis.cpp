#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "errors.hpp"

namespace darwinnet::analysis {

std::vector<DuanePoint> duane_points(std::span<const double> event_times) {
  std::vector<DuanePoint> out;
  out.reserve(event_times.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < event_times.size(); ++i) {
    const double t = event_times[i];
    if (!(t > 0.0)) throw DomainError("event times must be positive");
    if (i > 0 && !(t > prev)) throw DomainError("event times must be strictly increasing");
    out.push_back({t, static_cast<double>(i + 1) / t});
    prev = t;
  }
  return out;
}

LineFit loglog_regression(std::span<const DuanePoint> points) {
  if (points.size() < 2) throw InsufficientDataError("log-log regression needs at least 2 points");
  std::vector<double> xs, ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const auto& p : points) {
    if (!(p.t > 0.0) || !(p.rate > 0.0)) throw DomainError("log-log regression needs positive coordinates");
    xs.push_back(std::log10(p.t));
    ys.push_back(std::log10(p.rate));
  }
  const auto n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw DomainError("log-log regression needs at least two distinct times");

  LineFit fit;
  fit.n = points.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

PowerLawEstimate mle_fit(std::span<const double> event_times, double t_end) {
  if (event_times.size() < 2) throw InsufficientDataError("MLE fit needs at least 2 events");
  double log_sum = 0.0;
  for (double t : event_times) {
    if (!(t > 0.0) || !(t < t_end)) throw DomainError("MLE fit needs 0 < t_i < t_end for every event");
    log_sum += std::log(t_end / t);
  }
  const auto n = static_cast<double>(event_times.size());
  const double beta = n / log_sum;
  return {n / std::pow(t_end, beta), beta};
}

FitReport fit_growth(std::span<const double> event_times, double t_start, double t_end) {
  std::vector<double> selected;
  for (double t : event_times)
    if (t > t_start && t < t_end) selected.push_back(t);

  FitReport r;
  r.n_events = selected.size();
  r.t_end = t_end;
  r.fit_segment = {t_start, t_end};
  if (selected.size() < 2)
    throw InsufficientDataError("growth fit needs at least 2 events inside the fit segment, found " +
                                std::to_string(selected.size()));
  const auto est = mle_fit(selected, t_end);
  r.alpha_hat = est.alpha;
  r.beta_hat = est.beta;
  r.points = duane_points(selected);
  const auto line = loglog_regression(r.points);
  r.duane_slope = line.slope;
  r.duane_intercept = line.intercept;
  r.duane_r_squared = line.r_squared;
  return r;
}

ConvergenceReport convergence_report(const EventLog& log, double psi_threshold, std::int64_t tail_windows) {
  if (!(psi_threshold > 0.0 && psi_threshold < 1.0)) throw DomainError("psi threshold must lie in (0, 1)");
  if (tail_windows < 1) throw DomainError("tail_windows must be >= 1");
  ConvergenceReport r;
  r.psi_threshold = psi_threshold;
  r.tail_cycles = tail_windows * log.psi_window;
  if (log.total_cycles() < r.tail_cycles)
    throw InsufficientDataError("convergence check needs " + std::to_string(r.tail_cycles) +
                                " cycles, log has " + std::to_string(log.total_cycles()));
  for (const auto& rec : log.records)
    if (rec.psi_win < psi_threshold) r.last_subthreshold_cycle = rec.cycle;
  r.equilibrium = !r.last_subthreshold_cycle || *r.last_subthreshold_cycle <= log.total_cycles() - r.tail_cycles;
  return r;
}

RecoveryReport recovery_metrics(const EventLog& log, std::int64_t shock_cycle, double epsilon) {
  if (shock_cycle < 2 || shock_cycle > log.total_cycles())
    throw DomainError("shock cycle " + std::to_string(shock_cycle) + " outside the log's range [2, " +
                      std::to_string(log.total_cycles()) + "]");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");

  RecoveryReport r;
  r.shock_cycle = shock_cycle;
  const std::int64_t first = std::max<std::int64_t>(1, shock_cycle - log.psi_window);
  double sum = 0.0;
  for (std::int64_t c = first; c < shock_cycle; ++c) sum += log.at_cycle(c).psi_win;
  r.pre_shock_psi_mean = sum / static_cast<double>(shock_cycle - first);

  r.dip_cycle = shock_cycle;
  r.dip_min = log.at_cycle(shock_cycle).psi_win;
  for (std::int64_t c = shock_cycle + 1; c <= log.total_cycles(); ++c) {
    if (log.at_cycle(c).psi_win < r.dip_min) {
      r.dip_min = log.at_cycle(c).psi_win;
      r.dip_cycle = c;
    }
  }
  r.dip_depth = r.pre_shock_psi_mean - r.dip_min;

  // The slack absorbs rounding of the 6-decimal logged values.
  const double threshold = r.pre_shock_psi_mean - epsilon - 1e-12;
  for (std::int64_t c = r.dip_cycle + 1; c <= log.total_cycles(); ++c) {
    if (log.at_cycle(c).psi_win >= threshold) {
      r.recovery_cycle = c;
      r.recovery_time = c - shock_cycle;
      break;
    }
  }
  return r;
}

AnalysisReport analyze(const EventLog& log, const EventStream* events, const AnalysisOptions& options) {
  if (log.records.empty()) throw InsufficientDataError("empty event log");
  const std::int64_t shock = options.shock_cycle < 0 ? log.shock_cycle() : options.shock_cycle;
  // Shocked runs are fitted on the pre-shock segment only.
  const double segment_end = static_cast<double>(shock > 0 ? shock : log.total_cycles());

  std::vector<double> times;
  if (events && !options.cycle_indexed) {
    times = events->times();
  } else {
    for (const auto& rec : log.records)
      if (rec.agent) times.push_back(static_cast<double>(rec.cycle));
  }

  AnalysisReport report;
  report.fit = fit_growth(times, 0.0, segment_end);
  if (shock > 0) report.recovery = recovery_metrics(log, shock, options.epsilon);
  report.convergence = convergence_report(log, options.psi_threshold, options.tail_windows);
  return report;
}

std::string report_to_json(const AnalysisReport& report, int indent) {
  using nlohmann::json;
  const auto opt = [](const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); };
  json doc;
  const FitReport& f = report.fit;
  doc["fit"] = {{"alpha_hat", f.alpha_hat},
                {"beta_hat", f.beta_hat},
                {"duane_slope", f.duane_slope},
                {"duane_intercept", f.duane_intercept},
                {"duane_r_squared", f.duane_r_squared},
                {"n_events", f.n_events},
                {"t_end", f.t_end},
                {"fit_segment", {f.fit_segment.first, f.fit_segment.second}}};
  if (report.recovery) {
    const RecoveryReport& r = *report.recovery;
    doc["recovery"] = {{"shock_cycle", r.shock_cycle},
                       {"pre_shock_psi_mean", r.pre_shock_psi_mean},
                       {"dip_min", r.dip_min},
                       {"dip_cycle", r.dip_cycle},
                       {"recovery_cycle", opt(r.recovery_cycle)},
                       {"recovery_time", opt(r.recovery_time)},
                       {"dip_depth", r.dip_depth}};
  } else {
    doc["recovery"] = nullptr;
  }
  const ConvergenceReport& c = report.convergence;
  doc["convergence"] = {{"verdict", c.equilibrium ? "equilibrium" : "not_converged"},
                        {"psi_threshold", c.psi_threshold},
                        {"tail_cycles", c.tail_cycles},
                        {"last_subthreshold_cycle", opt(c.last_subthreshold_cycle)}};
  return doc.dump(indent);
}

std::string duane_points_to_csv(std::span<const DuanePoint> points) {
  std::string out = "t,cumulative_rate\n";
  char buf[96];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.6f,%.9g\n", p.t, p.rate);
    out += buf;
  }
  return out;
}

}  // namespace darwinnet::analysis
