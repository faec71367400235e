#include "event_log.hpp"

#include <algorithm>
#include <cstdio>

#include "csv.hpp"
#include "errors.hpp"

namespace darwinnet {

bool CycleRecord::has_event(std::string_view t) const {
  return std::find(events.begin(), events.end(), t) != events.end();
}

std::int64_t EventLog::shock_cycle() const {
  for (const auto& r : records)
    if (r.has_event(tag::shock)) return r.cycle;
  return 0;
}

std::vector<std::uint8_t> EventLog::agent_flags() const {
  std::vector<std::uint8_t> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.agent ? 1 : 0);
  return out;
}

std::vector<double> EventLog::latencies() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.latency_ms);
  return out;
}

std::vector<double> EventLog::psi_win_series() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.psi_win);
  return out;
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string event_log_to_csv(const EventLog& log) {
  std::string out = csv::join(event_log_header, ',') + '\n';
  out.reserve(out.size() + log.records.size() * 64);
  for (const auto& r : log.records) {
    out += std::to_string(r.cycle);
    out += ',';
    out += to_string(r.path);
    out += ',';
    out += format_fixed(r.latency_ms, 3);
    out += ',';
    out += std::to_string(r.mismatches);
    out += ',';
    out += r.agent ? '1' : '0';
    out += ',';
    out += std::to_string(r.active_gene_id);
    out += ',';
    out += format_fixed(r.psi_cum, 6);
    out += ',';
    out += format_fixed(r.psi_win, 6);
    out += ',';
    out += csv::join(r.events, ';');
    out += '\n';
  }
  return out;
}

EventLog event_log_from_csv(std::string_view text, std::int64_t psi_window) {
  EventLog log;
  log.psi_window = psi_window;
  for (const auto& row : csv::parse(text, event_log_header)) {
    CycleRecord r;
    r.cycle = csv::to_int(row, 0);
    if (r.cycle != log.total_cycles() + 1)
      throw ParseError(row.number, "expected cycle " + std::to_string(log.total_cycles() + 1) + ", found " +
                                       std::to_string(r.cycle));
    try {
      r.path = cycle_path_from_string(row.fields[1]);
    } catch (const DomainError& e) {
      throw ParseError(row.number, e.what());
    }
    r.latency_ms = csv::to_double(row, 2);
    r.mismatches = static_cast<int>(csv::to_int(row, 3));
    const auto agent = csv::to_int(row, 4);
    if (agent != 0 && agent != 1) throw ParseError(row.number, "agent must be 0 or 1");
    r.agent = agent == 1;
    if (r.agent != is_agent_path(r.path)) throw ParseError(row.number, "agent flag disagrees with path");
    r.active_gene_id = csv::to_uint(row, 5);
    r.psi_cum = csv::to_double(row, 6);
    r.psi_win = csv::to_double(row, 7);
    if (!row.fields[8].empty()) r.events = csv::split(row.fields[8], ';');
    log.records.push_back(std::move(r));
  }
  return log;
}

}  // namespace darwinnet
