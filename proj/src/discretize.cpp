#include "speedscale/discretize.hpp"

#include <algorithm>
#include <cmath>

#include "speedscale/errors.hpp"

namespace speedscale {

int SlotGrid::first_slot_at(const Rat& t) const {
  auto it = std::lower_bound(slots.begin(), slots.end(), t,
                             [](const Slot& s, const Rat& v) { return s.begin < v; });
  if (it == slots.end() || it->begin != t)
    throw InternalError("time " + rat_str(t) + " is not a slot boundary");
  return static_cast<int>(it - slots.begin());
}

int SlotGrid::last_slot_ending(const Rat& t) const {
  auto it = std::lower_bound(slots.begin(), slots.end(), t,
                             [](const Slot& s, const Rat& v) { return s.end < v; });
  if (it == slots.end() || it->end != t)
    throw InternalError("time " + rat_str(t) + " is not a slot boundary");
  return static_cast<int>(it - slots.begin());
}

std::vector<Rat> landmark_times(const Instance& instance, int proc_id) {
  std::vector<Rat> times;
  for (const auto& job : instance.jobs) {
    if (!job.eligible(proc_id)) continue;
    const auto& t = job.timing(proc_id);
    times.push_back(t.release);
    times.push_back(t.deadline);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

SlotGrid build_grid(const Instance& instance, int proc_id, const Rat& epsilon,
                    std::optional<long> slot_cap) {
  if (!(epsilon > 0)) throw ParameterError("epsilon must be > 0");
  if (slot_cap && *slot_cap < 1) throw ParameterError("slot_cap must be >= 1");

  SlotGrid grid;
  grid.landmarks = landmark_times(instance, proc_id);

  long n = 0;
  for (const auto& job : instance.jobs)
    if (job.eligible(proc_id)) ++n;

  // ceil(n^2 (1 + 1/eps)) computed exactly.
  const Rat count = Rat(n) * Rat(n) * (1 + Rat(1) / epsilon);
  BigInt per_gap = numerator(count) / denominator(count);
  if (per_gap * denominator(count) != numerator(count)) ++per_gap;
  if (per_gap < 1) per_gap = 1;
  if (per_gap > 1000000) {
    if (!slot_cap)
      throw ParameterError("slot count n^2(1+1/eps) = " + per_gap.str() +
                           " per gap is impractical; pass a slot_cap");
    per_gap = 1000000;
  }
  grid.slots_per_gap = per_gap.convert_to<long>();
  if (slot_cap && grid.slots_per_gap > *slot_cap) {
    grid.slots_per_gap = *slot_cap;
    grid.capped = true;
  }

  for (std::size_t g = 0; g + 1 < grid.landmarks.size(); ++g) {
    const Rat width = (grid.landmarks[g + 1] - grid.landmarks[g]) / grid.slots_per_gap;
    for (long k = 0; k < grid.slots_per_gap; ++k) {
      Slot s;
      s.begin = grid.landmarks[g] + width * k;
      s.end = (k + 1 == grid.slots_per_gap) ? grid.landmarks[g + 1]
                                            : grid.landmarks[g] + width * (k + 1);
      s.gap = static_cast<int>(g);
      grid.slots.push_back(std::move(s));
    }
  }
  return grid;
}

std::vector<Configuration> enumerate_configs(const Instance& instance, int proc_id,
                                             int job_index, const SlotGrid& grid) {
  const auto& job = instance.jobs[job_index];
  const auto& t = job.timing(proc_id);

  std::vector<Configuration> configs;
  if (grid.slots.empty()) return configs;
  const int lo = grid.first_slot_at(t.release);
  const int hi = grid.last_slot_ending(t.deadline);
  if (lo > hi) return configs;

  // Other jobs' life intervals on this processor, as (release, deadline).
  std::vector<std::pair<Rat, Rat>> lives;
  for (std::size_t k = 0; k < instance.jobs.size(); ++k) {
    if (static_cast<int>(k) == job_index) continue;
    if (!instance.jobs[k].eligible(proc_id)) continue;
    const auto& tk = instance.jobs[k].timing(proc_id);
    lives.emplace_back(tk.release, tk.deadline);
  }

  for (int first = lo; first <= hi; ++first) {
    const Rat span_begin = grid.slots[first].begin;
    // A run [span_begin, B] contains life [r, d] iff span_begin <= r and
    // d <= B; so B must stay strictly below every such d.
    bool bounded = false;
    Rat max_end;
    for (const auto& [r, d] : lives) {
      if (span_begin <= r) {
        if (!bounded || d < max_end) max_end = d;
        bounded = true;
      }
    }
    for (int last = first; last <= hi; ++last) {
      const Rat span_end = grid.slots[last].end;
      if (bounded && span_end >= max_end) break;
      configs.push_back({first, last, span_end - span_begin});
    }
  }
  return configs;
}

double config_energy(const Rat& work, const Rat& length, double alpha) {
  if (!(length > 0)) throw ParameterError("configuration length must be positive");
  return std::pow(rat_to_double(work), alpha) /
         std::pow(rat_to_double(length), alpha - 1.0);
}

}  // namespace speedscale
