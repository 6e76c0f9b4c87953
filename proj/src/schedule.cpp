#include <algorithm>
#include <cmath>

#include "cfdpf/harness.hpp"

namespace cfdpf {

namespace {

constexpr double kClockSlack = 1e-9;

int newest_index(double time, int n_steps) {
  return std::min(n_steps, static_cast<int>(std::floor(time + kClockSlack)));
}

double cycle_at(const ScheduleConfig& s, int index) {
  const auto i = static_cast<std::size_t>(std::max(index, 1) - 1);
  return i < s.cycle_profile.size() ? s.cycle_profile[i] : s.consensus_cycle;
}

}  // namespace

std::vector<FusionEvent> schedule_multirate(const ScheduleConfig& schedule, FusionMode mode,
                                            int n_steps) {
  std::vector<FusionEvent> events;
  double free_at = 0.0;
  int fused = 0;
  while (fused < n_steps) {
    // Index fused + 1 becomes available at t = fused + 1.
    const double start = std::max(free_at, static_cast<double>(fused + 1));
    if (start > n_steps + kClockSlack) break;
    FusionEvent e;
    e.start_time = start;
    e.available = newest_index(start, n_steps);
    e.from_index = fused;
    e.lag = e.available - fused;
    if (mode == FusionMode::standard) {
      e.to_index = fused + 1;
    } else {
      e.to_index = e.available;
      e.skipped = std::max(0, e.lag - schedule.max_lag);
    }
    e.end_time = start + cycle_at(schedule, e.available);
    free_at = e.end_time;
    fused = e.to_index;
    events.push_back(e);
  }
  return events;
}

std::vector<int> catch_up_rounds(const ScheduleConfig& schedule, int n_steps) {
  std::vector<int> rounds;
  double t = 1.0;
  int fused = 0;
  while (t <= n_steps + kClockSlack && fused < n_steps) {
    const int newest = newest_index(t, n_steps);
    const int backlog = newest - fused;
    if (backlog <= 0) {
      t = fused + 1.0;
      continue;
    }
    rounds.push_back(backlog);
    for (int i = fused + 1; i <= newest; ++i) t += cycle_at(schedule, newest_index(t, n_steps));
    fused = newest;
  }
  return rounds;
}

}  // namespace cfdpf
