#include "speedscale/multi.hpp"

#include <algorithm>
#include <cmath>

#include "speedscale/errors.hpp"
#include "speedscale/yds.hpp"

namespace speedscale {

Backend backend_from_name(const std::string& name) {
  if (name == "pipeline") return Backend::kPipeline;
  if (name == "yds-edf") return Backend::kYdsEdf;
  throw ParameterError("unknown backend '" + name + "' (use pipeline or yds-edf)");
}

const char* backend_name(Backend backend) {
  return backend == Backend::kPipeline ? "pipeline" : "yds-edf";
}

namespace {

Instance make_subset(const Instance& instance, int proc_index,
                     const std::vector<int>& job_indices) {
  Instance sub;
  sub.mode = Mode::kSingle;
  sub.processors = {instance.processors[proc_index]};
  const int pid = sub.processors.front().id;
  for (int j : job_indices) {
    Job job;
    job.id = instance.jobs[j].id;
    job.on[pid] = instance.jobs[j].timing(pid);
    sub.jobs.push_back(std::move(job));
  }
  return sub;
}

}  // namespace

AssignResult assign(const Instance& instance, const Rat& epsilon, std::uint64_t seed,
                    std::optional<long> slot_cap) {
  instance.validate();
  const int m = static_cast<int>(instance.processors.size());
  const int n = static_cast<int>(instance.jobs.size());

  std::vector<SlotGrid> grids(m);
  std::vector<std::vector<std::vector<Configuration>>> configs(m);
  for (int pi = 0; pi < m; ++pi) {
    const int pid = instance.processors[pi].id;
    grids[pi] = build_grid(instance, pid, epsilon, slot_cap);
    configs[pi].resize(n);
    for (int j = 0; j < n; ++j) {
      if (instance.jobs[j].eligible(pid))
        configs[pi][j] = enumerate_configs(instance, pid, j, grids[pi]);
    }
  }

  const ConfigLp lp = build_lp(instance, grids, configs);
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal)
    throw InfeasibleError(
        "heterogeneous configuration LP infeasible at this granularity; retry "
        "with a larger epsilon or slot_cap");

  const RoundedChoice choice = round_configs(lp, sol, mix_seed(seed, 0xA551));

  AssignResult result;
  result.lp_objective = sol.objective;
  result.lp_iterations = sol.iterations;
  result.lp_variables = lp.vars.size();
  result.assignment.proc_of_job.resize(n);
  result.assignment.job_indices_of_proc.resize(m);
  for (int j = 0; j < n; ++j) {
    const LpVariable& var = lp.vars[choice.var_of_job[j]];
    result.assignment.proc_of_job[j] = var.proc_index;
    result.assignment.job_indices_of_proc[var.proc_index].push_back(j);
  }

  result.preemptive.kind = ScheduleKind::kPreemptive;
  result.proc_preemptive_energy.assign(m, 0.0);
  for (int pi = 0; pi < m; ++pi) {
    std::vector<std::pair<int, Configuration>> chosen;
    for (int j : result.assignment.job_indices_of_proc[pi]) {
      const LpVariable& var = lp.vars[choice.var_of_job[j]];
      chosen.emplace_back(j, configs[pi][j][var.config_index]);
    }
    if (chosen.empty()) continue;
    SpeedUpResult spr = speed_up_processor(instance, instance.processors[pi].id,
                                           grids[pi], chosen);
    result.proc_preemptive_energy[pi] = energy(spr.schedule, instance).total;
    for (auto& seg : spr.schedule.segments)
      result.preemptive.segments.push_back(std::move(seg));
  }
  return result;
}

Schedule convert_processor(const Instance& subset, Backend backend, const Rat& epsilon,
                           std::uint64_t seed, int trials, std::optional<long> slot_cap,
                           ConvertStats* stats) {
  if (stats) {
    *stats = ConvertStats{};
    stats->requested = backend;
  }
  Schedule out;
  out.kind = ScheduleKind::kNonPreemptive;
  if (subset.jobs.empty()) return out;

  const YdsResult yds = yds_schedule(subset);
  if (stats) stats->yds_energy = yds.energy;

  if (backend == Backend::kYdsEdf) {
    if (execution_spans_respect_lives(subset, yds.schedule)) {
      const RestrictedInstance restricted = agreeable_restrict(subset, yds.schedule);
      out = edf_schedule(subset, restricted);
      if (stats) stats->energy = energy(out, subset).total;
      return out;
    }
    if (stats) stats->fell_back = true;
  }

  const SingleSolveResult single = solve_single(subset, epsilon, seed, trials, slot_cap);
  out = single.schedule;
  if (stats) {
    stats->energy = single.energy;
    stats->lp_objective = single.lp_objective;
  }
  return out;
}

MultiSolveResult solve_multi(const Instance& instance, const Rat& epsilon,
                             std::uint64_t seed, int trials, Backend backend,
                             std::optional<long> slot_cap) {
  AssignResult assigned = assign(instance, epsilon, seed, slot_cap);
  const int m = static_cast<int>(instance.processors.size());
  const int n = static_cast<int>(instance.jobs.size());

  // Partition sanity: subsets are disjoint with union equal to the job set.
  std::vector<char> seen(n, 0);
  std::size_t assigned_total = 0;
  for (const auto& subset : assigned.assignment.job_indices_of_proc) {
    for (int j : subset) {
      if (seen[j]) throw InternalError("job assigned to two processors");
      seen[j] = 1;
      ++assigned_total;
    }
  }
  if (assigned_total != static_cast<std::size_t>(n))
    throw InternalError("assignment does not cover every job");

  MultiSolveResult result;
  result.assignment = assigned.assignment;
  result.preemptive = std::move(assigned.preemptive);
  result.lp_objective = assigned.lp_objective;
  result.schedule.kind = ScheduleKind::kNonPreemptive;

  const InstanceStats st = stats(instance);
  const double soft_factor =
      std::pow(1.0 + rat_to_double(st.w_max) / rat_to_double(st.w_min), st.alpha_max);

  for (int pi = 0; pi < m; ++pi) {
    const Instance subset =
        make_subset(instance, pi, assigned.assignment.job_indices_of_proc[pi]);
    // The first conversion inherits the base seed unchanged so that the
    // single-processor reduction is exact.
    const std::uint64_t proc_seed = pi == 0 ? seed : mix_seed(seed, 0xC0 + pi);
    ConvertStats cs;
    Schedule npr = subset.jobs.empty()
                       ? Schedule{ScheduleKind::kNonPreemptive, {}}
                       : convert_processor(subset, backend, epsilon, proc_seed, trials,
                                           slot_cap, &cs);

    ProcessorReport report;
    report.proc_id = instance.processors[pi].id;
    report.jobs = static_cast<int>(subset.jobs.size());
    report.preemptive_energy = assigned.proc_preemptive_energy[pi];
    report.energy = cs.energy;
    report.yds_energy = cs.yds_energy;
    report.fell_back = cs.fell_back;
    report.soft_bound = soft_factor * cs.yds_energy;
    report.soft_bound_ok = cs.energy <= report.soft_bound * (1.0 + 1e-9) ||
                           subset.jobs.empty();
    result.per_processor.push_back(report);

    for (auto& seg : npr.segments) result.schedule.segments.push_back(std::move(seg));
  }

  result.energy = energy(result.schedule, instance).total;

  const auto check = verify(result.schedule, instance, ScheduleKind::kNonPreemptive);
  if (!check.ok())
    throw InternalError("multiprocessor pipeline emitted an infeasible schedule: " +
                        check.violations.front().detail);
  return result;
}

}  // namespace speedscale
