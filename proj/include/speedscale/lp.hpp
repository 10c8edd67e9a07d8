#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "speedscale/discretize.hpp"
#include "speedscale/model.hpp"

namespace speedscale {

// One (job, configuration) variable; in multi mode one (processor, job,
// configuration) variable. Its column has a 1 in the job's cover row and a 1
// in every capacity row of its slot run.
struct LpVariable {
  int job_index = 0;
  int proc_index = 0;
  int config_index = 0;
  int cap_first = 0;  // global capacity-row indices, inclusive
  int cap_last = 0;
  double cost = 0.0;  // w^alpha / |c|^(alpha-1)
};

struct ConfigLp {
  int num_jobs = 0;
  int num_cap_rows = 0;
  std::vector<LpVariable> vars;                 // job-major order
  std::vector<std::pair<int, int>> job_vars;    // per job: [begin, end) into vars
  std::vector<int> cap_row_offset;              // per processor index
  std::vector<int> cap_rows_per_proc;
};

enum class LpStatus { kOptimal, kInfeasible };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;  // one weight per variable, in vars order
  double objective = 0.0;
  long iterations = 0;
};

// Assembles the configuration LP:
//   min  sum_v cost_v x_v
//   s.t. sum_{v of job j} x_v >= 1            for every job
//        sum_{v covering slot t} x_v <= 1     for every (processor, slot)
//        x >= 0
// grids and configs are indexed by processor index, configs also by job index.
// Throws InfeasibleError naming the job if some job has no configuration.
ConfigLp build_lp(const Instance& instance, const std::vector<SlotGrid>& grids,
                  const std::vector<std::vector<std::vector<Configuration>>>& configs);

// Deterministic two-phase revised simplex; identical input gives identical
// output. The objective of an optimal solution lower-bounds every
// slot-respecting schedule that obeys the configuration restriction.
LpSolution solve_lp(const ConfigLp& lp);

// Text dump in LP interchange format for cross-checks with external solvers.
void dump_lp(const ConfigLp& lp, std::ostream& out);

}  // namespace speedscale
