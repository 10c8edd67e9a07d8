#pragma once

#include <optional>
#include <vector>

#include "speedscale/model.hpp"

namespace speedscale {

// Half-open slot [begin, end) inside one landmark gap. Within a gap all slots
// have equal length; boundaries are exact rationals.
struct Slot {
  Rat begin;
  Rat end;
  int gap = 0;  // index of the landmark gap containing the slot

  Rat length() const { return end - begin; }
};

struct SlotGrid {
  std::vector<Rat> landmarks;  // strictly increasing
  std::vector<Slot> slots;     // contiguous, partition [landmarks.front(), landmarks.back()]
  long slots_per_gap = 0;
  bool capped = false;  // true when slot_cap reduced the paper's slot count

  int slot_count() const { return static_cast<int>(slots.size()); }
  // Index of the first slot whose begin equals t (t must be a landmark).
  int first_slot_at(const Rat& t) const;
  // Index of the last slot whose end equals t (t must be a landmark).
  int last_slot_ending(const Rat& t) const;
};

// A run of consecutive slots inside the job's life interval that does not
// contain the complete life interval of any other job.
struct Configuration {
  int first_slot = 0;
  int last_slot = 0;  // inclusive
  Rat length;         // sum of contained slot lengths = span end - span start
};

// Sorted, deduplicated union of releases and deadlines on `proc_id`.
std::vector<Rat> landmark_times(const Instance& instance, int proc_id);

// Splits every landmark gap into ceil(n^2 (1 + 1/epsilon)) equal slots,
// clamped to slot_cap when provided. epsilon must be > 0.
SlotGrid build_grid(const Instance& instance, int proc_id, const Rat& epsilon,
                    std::optional<long> slot_cap);

// All configurations of jobs[job_index] on `proc_id`, in (first, last) order.
std::vector<Configuration> enumerate_configs(const Instance& instance, int proc_id,
                                             int job_index, const SlotGrid& grid);

// Energy of executing `work` at constant speed over a window of `length`:
// work^alpha / length^(alpha-1).
double config_energy(const Rat& work, const Rat& length, double alpha);

}  // namespace speedscale
