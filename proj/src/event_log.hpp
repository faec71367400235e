#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "node.hpp"

namespace darwinnet {

inline constexpr int event_log_schema_version = 1;

struct CycleRecord {
  std::int64_t cycle = 0;
  CyclePath path = CyclePath::fast;
  double latency_ms = 0.0;
  int mismatches = 0;
  bool agent = false;
  std::uint64_t active_gene_id = 0;
  double psi_cum = 1.0;
  double psi_win = 1.0;
  std::vector<std::string> events;

  bool has_event(std::string_view tag) const;
};

struct EventLog {
  std::vector<CycleRecord> records;
  std::int64_t psi_window = 50;
  int schema_version = event_log_schema_version;

  std::int64_t total_cycles() const { return static_cast<std::int64_t>(records.size()); }
  const CycleRecord& at_cycle(std::int64_t cycle) const { return records.at(static_cast<std::size_t>(cycle - 1)); }

  // First cycle tagged SHOCK, or 0 when none.
  std::int64_t shock_cycle() const;
  std::vector<std::uint8_t> agent_flags() const;
  std::vector<double> latencies() const;
  std::vector<double> psi_win_series() const;
};

inline const std::vector<std::string> event_log_header = {
    "cycle", "path", "latency_ms", "mismatches", "agent", "active_gene_id", "psi_cum", "psi_win", "events"};

// Fixed-precision writers shared by every CSV that carries these columns.
std::string format_fixed(double v, int decimals);

std::string event_log_to_csv(const EventLog& log);

// Throws ParseError with the offending row number; cycles must be contiguous
// from 1.
EventLog event_log_from_csv(std::string_view text, std::int64_t psi_window = 50);

}  // namespace darwinnet
