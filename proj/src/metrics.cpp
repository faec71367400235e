#include "metrics.hpp"

#include <algorithm>
#include <numeric>

#include "errors.hpp"

namespace darwinnet::metrics {

namespace {

struct Tail {
  std::size_t begin;
  std::size_t count;
};

Tail tail(std::size_t size, std::int64_t cycle, std::int64_t window) {
  if (cycle < 1) throw DomainError("cycle must be >= 1");
  if (window < 1) throw DomainError("window must be >= 1");
  if (static_cast<std::size_t>(cycle) > size) throw DomainError("cycle beyond recorded history");
  const auto w = static_cast<std::size_t>(std::min(cycle, window));
  return {static_cast<std::size_t>(cycle) - w, w};
}

}  // namespace

double psi_cumulative(std::int64_t n_agent, std::int64_t n_total) {
  if (n_total < 1) throw DomainError("n_total must be >= 1");
  if (n_agent < 0 || n_agent > n_total) throw DomainError("n_agent must lie in [0, n_total]");
  return 1.0 - static_cast<double>(n_agent) / static_cast<double>(n_total);
}

double psi_windowed(std::span<const std::uint8_t> agent_flags, std::int64_t cycle, std::int64_t window) {
  const Tail t = tail(agent_flags.size(), cycle, window);
  const auto agents = std::count_if(agent_flags.begin() + static_cast<std::ptrdiff_t>(t.begin),
                                    agent_flags.begin() + static_cast<std::ptrdiff_t>(t.begin + t.count),
                                    [](std::uint8_t f) { return f != 0; });
  return psi_cumulative(agents, static_cast<std::int64_t>(t.count));
}

double latency_moving_avg(std::span<const double> latencies, std::int64_t cycle, std::int64_t window) {
  const Tail t = tail(latencies.size(), cycle, window);
  const auto s = latencies.subspan(t.begin, t.count);
  return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(t.count);
}

double latency_median(std::span<const double> latencies, std::int64_t cycle, std::int64_t window) {
  const Tail t = tail(latencies.size(), cycle, window);
  const auto s = latencies.subspan(t.begin, t.count);
  std::vector<double> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
}

PsiTracker::PsiTracker(std::int64_t window) : window_(window) {
  if (window_ < 1) throw DomainError("window must be >= 1");
}

void PsiTracker::push(bool agent) {
  flags_.push_back(agent ? 1 : 0);
  if (agent) {
    ++n_agent_;
    ++in_window_;
  }
  const auto n = flags_.size();
  if (n > static_cast<std::size_t>(window_) && flags_[n - 1 - static_cast<std::size_t>(window_)])
    --in_window_;
}

double PsiTracker::windowed() const {
  return psi_cumulative(in_window_, std::min<std::int64_t>(cycles(), window_));
}

}  // namespace darwinnet::metrics
