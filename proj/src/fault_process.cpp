#include "fault_process.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "csv.hpp"
#include "errors.hpp"

namespace darwinnet {

void FaultParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be a positive finite real");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be a positive finite real");
  if (origin_cycle < 0) throw DomainError("origin_cycle must be non-negative");
}

void ShockSpec::validate() const {
  if (shock_cycle < 1) throw DomainError("shock_cycle must be >= 1");
  if (!(invalidate_fraction >= 0.0 && invalidate_fraction <= 1.0))
    throw DomainError("invalidate_fraction must lie in [0, 1]");
  params.validate();
}

std::string_view to_string(EventSource s) { return s == EventSource::base ? "base" : "shock"; }

EventSource event_source_from_string(std::string_view s) {
  if (s == "base") return EventSource::base;
  if (s == "shock") return EventSource::shock;
  throw DomainError("unknown event source '" + std::string(s) + "'");
}

std::string_view to_string(FaultMode m) {
  return m == FaultMode::stochastic ? "stochastic" : "deterministic";
}

FaultMode fault_mode_from_string(std::string_view s) {
  if (s == "stochastic") return FaultMode::stochastic;
  if (s == "deterministic") return FaultMode::deterministic;
  throw DomainError("unknown fault mode '" + std::string(s) + "'");
}

std::vector<double> EventStream::times() const {
  std::vector<double> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back(e.time);
  return out;
}

std::vector<double> EventStream::times(EventSource source) const {
  std::vector<double> out;
  for (const auto& e : events)
    if (e.source == source) out.push_back(e.time);
  return out;
}

double intensity(double t, const FaultParams& p) {
  if (!(t > 0.0)) throw DomainError("intensity is defined for t > 0 only");
  return p.alpha * p.beta * std::pow(t, p.beta - 1.0);
}

double cumulative_mean(double t, const FaultParams& p) {
  if (!(t >= 0.0)) throw DomainError("cumulative_mean requires t >= 0");
  if (t == 0.0) return 0.0;
  return p.alpha * std::pow(t, p.beta);
}

double cumulative_rate(double t, const FaultParams& p) {
  if (!(t > 0.0)) throw DomainError("cumulative_rate is defined for t > 0 only");
  return p.alpha * std::pow(t, p.beta - 1.0);
}

EventStream deterministic_schedule(const FaultParams& p, double horizon, EventSource source) {
  p.validate();
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  // Counting by floor(N(T)) keeps the event count exact; the clamp absorbs
  // pow() rounding for the last event when N(T) is an integer.
  const auto count = static_cast<std::int64_t>(std::floor(cumulative_mean(horizon, p)));
  const double origin = static_cast<double>(p.origin_cycle);
  EventStream out;
  out.events.reserve(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  for (std::int64_t k = 1; k <= count; ++k) {
    const double local = std::min(std::pow(static_cast<double>(k) / p.alpha, 1.0 / p.beta), horizon);
    out.events.push_back({origin + local, source});
  }
  return out;
}

EventStream sample_nhpp(const FaultParams& p, double horizon, Rng& rng, EventSource source) {
  p.validate();
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  const double mean_at_horizon = cumulative_mean(horizon, p);
  const double origin = static_cast<double>(p.origin_cycle);
  EventStream out;
  double arrival = 0.0;
  for (;;) {
    arrival += rng.exponential();
    if (arrival > mean_at_horizon) break;
    const double local = std::pow(arrival / p.alpha, 1.0 / p.beta);
    if (!(local > 0.0)) continue;  // underflow guard for vanishing draws
    out.events.push_back({origin + std::min(local, horizon), source});
  }
  return out;
}

EventStream generate(const FaultParams& p, double horizon, FaultMode mode, Rng& rng,
                     EventSource source) {
  return mode == FaultMode::stochastic ? sample_nhpp(p, horizon, rng, source)
                                       : deterministic_schedule(p, horizon, source);
}

EventStream superimpose(const EventStream& base, const ShockSpec& shock, FaultMode mode, Rng& rng,
                        double horizon) {
  const double onset = static_cast<double>(shock.shock_cycle);
  if (shock.shock_cycle < 1 || onset >= horizon) return base;

  FaultParams local = shock.params;
  local.origin_cycle = shock.shock_cycle;
  const EventStream extra = generate(local, horizon - onset, mode, rng, EventSource::shock);

  EventStream out;
  out.events.reserve(base.size() + extra.size());
  std::merge(base.events.begin(), base.events.end(), extra.events.begin(), extra.events.end(),
             std::back_inserter(out.events),
             [](const FaultEvent& a, const FaultEvent& b) { return a.time < b.time; });
  return out;
}

std::int64_t owning_cycle(double t) { return static_cast<std::int64_t>(std::ceil(t)); }

std::map<std::int64_t, int> events_to_cycles(const EventStream& s, std::int64_t total_cycles) {
  std::map<std::int64_t, int> out;
  for (const auto& e : s.events) {
    if (!(e.time > 0.0)) throw RangeError("event time must be positive");
    if (e.time > static_cast<double>(total_cycles))
      throw RangeError("event at t=" + std::to_string(e.time) + " lies beyond cycle " +
                       std::to_string(total_cycles));
    ++out[owning_cycle(e.time)];
  }
  return out;
}

std::string events_to_csv(const EventStream& s) {
  std::string out = "time,source\n";
  char buf[64];
  for (const auto& e : s.events) {
    std::snprintf(buf, sizeof buf, "%.6f,", e.time);
    out += buf;
    out += to_string(e.source);
    out += '\n';
  }
  return out;
}

EventStream events_from_csv(std::string_view text) {
  EventStream out;
  const auto rows = csv::parse(text, {"time", "source"});
  for (const auto& row : rows) {
    FaultEvent e{csv::to_double(row, 0), EventSource::base};
    try {
      e.source = event_source_from_string(row.fields[1]);
    } catch (const DomainError& ex) {
      throw ParseError(row.number, ex.what());
    }
    if (!out.events.empty() && e.time < out.events.back().time)
      throw ParseError(row.number, "event times must be non-decreasing");
    out.events.push_back(e);
  }
  return out;
}

}  // namespace darwinnet
