#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "speedscale/lp.hpp"

namespace speedscale {

// One configuration per job, sampled with probability proportional to the
// job's LP weights (weights are normalized per job before sampling).
struct RoundedChoice {
  std::vector<int> var_of_job;  // index into ConfigLp::vars, one entry per job
  std::uint64_t seed = 0;
};

// Deterministic given the seed: one uniform draw per job, in job order.
RoundedChoice round_configs(const ConfigLp& lp, const LpSolution& solution,
                            std::uint64_t seed);

// Per-slot load after rounding: common speed and the work each job executes
// inside the slot. speed * |t| = sum of works, exactly.
struct SlotLoad {
  int slot = 0;
  Rat speed;
  std::vector<std::pair<int, Rat>> work_of_job;  // (job id, work in slot)
};

struct SpeedUpResult {
  Schedule schedule;  // feasible preemptive; co-scheduled jobs serialized by id
  std::vector<SlotLoad> profile;
};

// Spreads each job uniformly over its chosen configuration (constant demand
// w_j/|c_j|) and runs every slot at the summed speed, serializing the slot
// among its jobs in ascending job id.
SpeedUpResult speed_up_processor(
    const Instance& instance, int proc_id, const SlotGrid& grid,
    const std::vector<std::pair<int, Configuration>>& chosen /* (job index, config) */);

// Single-mode wrapper resolving the rounded variables against the config table.
SpeedUpResult speed_up(const RoundedChoice& choice, const SlotGrid& grid,
                       const Instance& instance, const ConfigLp& lp,
                       const std::vector<std::vector<std::vector<Configuration>>>& configs);

struct RestrictedJob {
  int job_id = 0;
  Rat first_start;   // b_j: first start in the preemptive schedule
  Rat last_end;      // e_j: last end in the preemptive schedule
  Rat duration;      // total time occupied in the preemptive schedule
  Rat processing;    // p_j: contiguous run length used by the EDF step
  Rat release;       // r'_j
  Rat deadline;      // d'_j
  double profile_energy = 0.0;  // this job's energy in the preemptive schedule
};

struct RestrictedInstance {
  std::vector<RestrictedJob> jobs;
  // The restricted instance as a plain single-mode instance (works kept).
  Instance as_instance(const Instance& original) const;
};

// Tightens life intervals around the executions in `preemptive` so that the
// result is agreeable while still covering each job's execution span:
//   r'_j = max(r_j, max{ r_k : k != j, d_k <= e_j })
//   d'_j = min(d_j, min{ d_k : k != j, r_k >  r'_j })
// Requires that no execution span [b_j, e_j] contains another job's complete
// life interval (guaranteed by the configuration restriction); throws
// InternalError otherwise, and if the result fails is_agreeable.
RestrictedInstance agreeable_restrict(const Instance& instance,
                                      const Schedule& preemptive);

// True iff no job's execution span [b_j, e_j] in `schedule` contains another
// job's complete life interval.
bool execution_spans_respect_lives(const Instance& instance, const Schedule& schedule);

// Places each job contiguously for processing time p_j at speed w_j/p_j,
// earliest-deadline-first (ties by release, then id), at the earliest
// feasible start. Total energy equals the preemptive schedule's energy.
Schedule edf_schedule(const Instance& instance, const RestrictedInstance& restricted);

struct TrialStats {
  std::uint64_t seed = 0;
  double preemptive_energy = 0.0;
  double energy = 0.0;
};

struct SingleSolveResult {
  Schedule schedule;             // best non-preemptive schedule found
  Schedule preemptive;           // the matching preemptive schedule
  RestrictedInstance restricted; // the matching restricted instance
  double energy = 0.0;
  double lp_objective = 0.0;
  long lp_iterations = 0;
  std::size_t lp_variables = 0;
  long slots_per_gap = 0;
  bool slot_cap_engaged = false;
  int best_trial = 0;
  std::vector<TrialStats> trials;
};

// End-to-end single-processor pipeline: discretize, solve the configuration
// LP, then keep the best of `trials` independent roundings, each sped-up,
// restricted to an agreeable instance and EDF-scheduled.
SingleSolveResult solve_single(const Instance& instance, const Rat& epsilon,
                               std::uint64_t seed, int trials,
                               std::optional<long> slot_cap);

}  // namespace speedscale
