#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "random.hpp"

namespace darwinnet {

// Parameters of a Crow-AMSAA power-law mismatch process with mean function
// N(t) = alpha * t^beta on the process's local clock. The local clock starts
// at global time origin_cycle.
struct FaultParams {
  double alpha = 2.0;
  double beta = 0.6;
  std::int64_t origin_cycle = 0;

  // Throws DomainError unless alpha > 0, beta > 0, origin_cycle >= 0.
  void validate() const;
};

struct ShockSpec {
  std::int64_t shock_cycle = 1000;
  FaultParams params{3.0, 0.4, 1000};
  double invalidate_fraction = 0.5;

  void validate() const;
};

enum class EventSource : std::uint8_t { base, shock };

std::string_view to_string(EventSource s);
EventSource event_source_from_string(std::string_view s);

struct FaultEvent {
  double time;  // global clock
  EventSource source;

  friend bool operator==(const FaultEvent&, const FaultEvent&) = default;
};

// A realized mismatch stream, sorted by time.
struct EventStream {
  std::vector<FaultEvent> events;

  std::size_t size() const { return events.size(); }
  bool empty() const { return events.empty(); }
  std::vector<double> times() const;
  std::vector<double> times(EventSource source) const;

  friend bool operator==(const EventStream&, const EventStream&) = default;
};

enum class FaultMode : std::uint8_t { stochastic, deterministic };

std::string_view to_string(FaultMode m);
FaultMode fault_mode_from_string(std::string_view s);

// lambda(t) = alpha * beta * t^(beta - 1); t is local time, t > 0.
double intensity(double t, const FaultParams& p);

// N(t) = alpha * t^beta; t >= 0.
double cumulative_mean(double t, const FaultParams& p);

// C(t) = N(t) / t = alpha * t^(beta - 1); t > 0.
double cumulative_rate(double t, const FaultParams& p);

// k-th event at the local time where the expected count first reaches k:
// t_k = (k / alpha)^(1 / beta), k = 1 .. floor(alpha * horizon^beta).
// horizon is local; emitted times are global (origin_cycle + t_k).
EventStream deterministic_schedule(const FaultParams& p, double horizon,
                                   EventSource source = EventSource::base);

// Time-transformed unit-rate Poisson process: t_k = (E_k / alpha)^(1 / beta).
EventStream sample_nhpp(const FaultParams& p, double horizon, Rng& rng,
                        EventSource source = EventSource::base);

EventStream generate(const FaultParams& p, double horizon, FaultMode mode, Rng& rng,
                     EventSource source = EventSource::base);

// Merges base with a fresh shock process whose local time 0 is global time
// shock.shock_cycle, truncated at global time `horizon`. A shock at or beyond
// the horizon leaves base unchanged. At equal times base events sort first.
EventStream superimpose(const EventStream& base, const ShockSpec& shock, FaultMode mode, Rng& rng,
                        double horizon);

// Cycle c owns the interval (c - 1, c]; returns cycle -> event count (>= 1).
// Throws RangeError for an event later than total_cycles.
std::map<std::int64_t, int> events_to_cycles(const EventStream& s, std::int64_t total_cycles);

std::int64_t owning_cycle(double t);

// Two-column CSV: time (6 decimals), source.
std::string events_to_csv(const EventStream& s);
EventStream events_from_csv(std::string_view text);

}  // namespace darwinnet
