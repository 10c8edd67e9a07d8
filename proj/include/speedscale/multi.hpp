#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "speedscale/single.hpp"

namespace speedscale {

// Non-preemptive conversion backend for one processor's job subset.
enum class Backend {
  kPipeline,  // rerun the single-processor LP pipeline on the subset
  kYdsEdf,    // YDS preemptive optimum + agreeable restriction + EDF;
              // falls back to kPipeline when a YDS execution span contains
              // another job's life interval
};

Backend backend_from_name(const std::string& name);
const char* backend_name(Backend backend);

struct Assignment {
  std::vector<int> proc_of_job;                      // processor index per job index
  std::vector<std::vector<int>> job_indices_of_proc;  // disjoint, union = all jobs
};

struct AssignResult {
  Assignment assignment;
  Schedule preemptive;  // per-processor sped-up sub-schedules, concatenated
  std::vector<double> proc_preemptive_energy;  // per processor index
  double lp_objective = 0.0;
  long lp_iterations = 0;
  std::size_t lp_variables = 0;
};

// Algorithm step 1: per-processor grids and configurations from the
// processor-specific job parameters, one heterogeneous configuration LP, one
// randomized rounding assigning every job a (processor, configuration) pair,
// then the per-slot speed-up on each processor.
AssignResult assign(const Instance& instance, const Rat& epsilon, std::uint64_t seed,
                    std::optional<long> slot_cap);

struct ConvertStats {
  Backend requested = Backend::kPipeline;
  bool fell_back = false;          // yds-edf precondition failed
  double yds_energy = 0.0;         // optimal preemptive energy of the subset
  double energy = 0.0;
  double lp_objective = 0.0;       // pipeline backend only
};

// Non-preemptive single-processor schedule for one assigned subset, given as
// a single-mode instance. Empty subsets give empty schedules.
Schedule convert_processor(const Instance& subset, Backend backend, const Rat& epsilon,
                           std::uint64_t seed, int trials, std::optional<long> slot_cap,
                           ConvertStats* stats);

struct ProcessorReport {
  int proc_id = 0;
  int jobs = 0;
  double preemptive_energy = 0.0;
  double energy = 0.0;      // non-preemptive
  double yds_energy = 0.0;  // lower bound for this subset (0 when empty)
  bool fell_back = false;
  // Soft check of the per-processor conversion against its preemptive
  // optimum: energy <= (1 + w_max/w_min)^alpha * yds_energy. Reported, and
  // meaningful as a warning only for the yds-edf backend.
  double soft_bound = 0.0;
  bool soft_bound_ok = true;
};

struct MultiSolveResult {
  Schedule schedule;    // concatenation of the per-processor schedules
  Schedule preemptive;  // assignment-stage schedule S
  Assignment assignment;
  double energy = 0.0;
  double lp_objective = 0.0;
  std::vector<ProcessorReport> per_processor;
};

// Algorithm step 2: convert each processor's subset independently and
// concatenate. Works for any m >= 1; with one processor and the pipeline
// backend it reproduces solve_single exactly under the same seed.
MultiSolveResult solve_multi(const Instance& instance, const Rat& epsilon,
                             std::uint64_t seed, int trials, Backend backend,
                             std::optional<long> slot_cap);

}  // namespace speedscale
