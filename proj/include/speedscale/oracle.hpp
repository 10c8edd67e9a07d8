#pragma once

#include <cstdint>
#include <optional>

#include "speedscale/discretize.hpp"
#include "speedscale/model.hpp"

namespace speedscale {

// Truncated evaluation of the generalized Bell number
//   B~_alpha = sum_{k>=0} k^alpha e^{-1} / k!,
// the alpha-th moment of a Poisson(1) variable; equals the integer Bell
// numbers at integer alpha.
struct BellTilde {
  double alpha = 0.0;
  double value = 0.0;
  int terms_used = 0;
  double truncation_bound = 0.0;  // rigorous tail majorant at the stop index
};

BellTilde bell_tilde(double alpha, double tol);

struct BruteForceResult {
  double energy = 0.0;
  Schedule schedule;  // slot-aligned, one configuration per job
};

// Exact optimum over integral configuration assignments (one configuration
// per job, pairwise slot-disjoint): the integer program the LP relaxes.
// Refuses instances with more than 6 jobs or more than 60 slots; throws
// InfeasibleError when no disjoint assignment exists.
BruteForceResult brute_force_single(const Instance& instance, const SlotGrid& grid);

// Feasible preemptive schedule from randomized EDF under a random per-gap
// speed profile, scaled until every deadline is met. Test adversary only;
// returns nullopt if no feasible profile is found within the retry budget.
std::optional<Schedule> random_feasible_preemptive(const Instance& instance,
                                                   std::uint64_t seed);

}  // namespace speedscale
