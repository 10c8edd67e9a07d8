#pragma once

#include "speedscale/model.hpp"

namespace speedscale {

struct YdsResult {
  Schedule schedule;  // optimal preemptive schedule; one segment per job on
                      // agreeable instances
  double energy = 0.0;
};

// Optimal preemptive single-processor schedule: repeatedly extract the
// maximum-density interval (ties: leftmost start, then earliest end), run its
// jobs there at the density speed under EDF, contract time and recurse.
YdsResult yds_schedule(const Instance& instance);

}  // namespace speedscale
