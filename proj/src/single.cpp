#include "speedscale/single.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "speedscale/errors.hpp"

namespace speedscale {

namespace {

constexpr double kEnergyRelTol = 1e-9;

double next_uniform(std::mt19937_64& rng) {
  // 53-bit uniform in [0, 1); identical across platforms.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

RoundedChoice round_configs(const ConfigLp& lp, const LpSolution& solution,
                            std::uint64_t seed) {
  if (solution.status != LpStatus::kOptimal)
    throw ParameterError("round_configs needs an optimal LP solution");

  RoundedChoice choice;
  choice.seed = seed;
  choice.var_of_job.resize(lp.num_jobs, -1);
  std::mt19937_64 rng(seed);

  for (int j = 0; j < lp.num_jobs; ++j) {
    const auto [begin, end] = lp.job_vars[j];
    double total = 0.0;
    for (int v = begin; v < end; ++v) total += std::max(0.0, solution.x[v]);
    if (total <= 1e-12)
      throw InternalError("job has all-zero configuration weights (cover violated)");
    const double target = next_uniform(rng) * total;
    double acc = 0.0;
    int picked = end - 1;
    for (int v = begin; v < end; ++v) {
      acc += std::max(0.0, solution.x[v]);
      if (acc >= target && solution.x[v] > 0.0) {
        picked = v;
        break;
      }
    }
    choice.var_of_job[j] = picked;
  }
  return choice;
}

SpeedUpResult speed_up_processor(
    const Instance& instance, int proc_id, const SlotGrid& grid,
    const std::vector<std::pair<int, Configuration>>& chosen) {
  // Demand per slot: each job contributes w_j / |c_j| to every slot of its
  // configuration, which is the constant speed it would use alone.
  std::map<int, std::vector<std::pair<int, Rat>>> per_slot;  // slot -> (job id, v_j)
  for (const auto& [job_index, config] : chosen) {
    const Job& job = instance.jobs[job_index];
    const Rat v = job.timing(proc_id).work / config.length;
    for (int t = config.first_slot; t <= config.last_slot; ++t)
      per_slot[t].emplace_back(job.id, v);
  }

  SpeedUpResult result;
  result.schedule.kind = ScheduleKind::kPreemptive;
  for (auto& [slot_index, jobs] : per_slot) {
    std::sort(jobs.begin(), jobs.end());  // serialize by ascending job id
    const Slot& slot = grid.slots[slot_index];
    Rat speed = 0;
    for (const auto& [id, v] : jobs) speed += v;

    SlotLoad load;
    load.slot = slot_index;
    load.speed = speed;
    Rat cursor = slot.begin;
    for (const auto& [id, v] : jobs) {
      const Rat piece = slot.length() * v / speed;
      result.schedule.segments.push_back({id, proc_id, cursor, cursor + piece, speed});
      load.work_of_job.emplace_back(id, slot.length() * v);
      cursor += piece;
    }
    if (cursor != slot.end)
      throw InternalError("speed-up pieces do not fill the slot exactly");
    result.profile.push_back(std::move(load));
  }

  // Merge touching pieces of the same job at the same speed.
  auto& segs = result.schedule.segments;
  std::stable_sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) {
    return a.start < b.start;
  });
  std::vector<Segment> merged;
  for (const auto& seg : segs) {
    if (!merged.empty() && merged.back().job == seg.job &&
        merged.back().speed == seg.speed && merged.back().end == seg.start) {
      merged.back().end = seg.end;
    } else {
      merged.push_back(seg);
    }
  }
  segs = std::move(merged);
  return result;
}

SpeedUpResult speed_up(const RoundedChoice& choice, const SlotGrid& grid,
                       const Instance& instance, const ConfigLp& lp,
                       const std::vector<std::vector<std::vector<Configuration>>>& configs) {
  const int proc_id = instance.solo_processor().id;
  std::vector<std::pair<int, Configuration>> chosen;
  chosen.reserve(choice.var_of_job.size());
  for (int j = 0; j < lp.num_jobs; ++j) {
    const LpVariable& var = lp.vars[choice.var_of_job[j]];
    chosen.emplace_back(j, configs[var.proc_index][j][var.config_index]);
  }
  return speed_up_processor(instance, proc_id, grid, chosen);
}

bool execution_spans_respect_lives(const Instance& instance, const Schedule& schedule) {
  const int pid = instance.solo_processor().id;
  std::map<int, std::pair<Rat, Rat>> span;  // job id -> [b, e]
  for (const auto& seg : schedule.segments) {
    auto it = span.find(seg.job);
    if (it == span.end()) {
      span[seg.job] = {seg.start, seg.end};
    } else {
      if (seg.start < it->second.first) it->second.first = seg.start;
      if (seg.end > it->second.second) it->second.second = seg.end;
    }
  }
  for (const auto& [id, be] : span) {
    for (const auto& other : instance.jobs) {
      if (other.id == id) continue;
      const auto& t = other.timing(pid);
      if (be.first <= t.release && t.deadline <= be.second) return false;
    }
  }
  return true;
}

RestrictedInstance agreeable_restrict(const Instance& instance,
                                      const Schedule& preemptive) {
  const int pid = instance.solo_processor().id;
  const double alpha = instance.solo_processor().alpha;
  const int n = static_cast<int>(instance.jobs.size());

  struct Acc {
    bool seen = false;
    Rat b, e, duration;
    double energy = 0.0;
    bool constant_speed = true;
    Rat speed;
  };
  std::map<int, Acc> acc;
  for (const auto& seg : preemptive.segments) {
    Acc& a = acc[seg.job];
    if (!a.seen) {
      a.seen = true;
      a.b = seg.start;
      a.e = seg.end;
      a.speed = seg.speed;
    } else {
      if (seg.start < a.b) a.b = seg.start;
      if (seg.end > a.e) a.e = seg.end;
      if (seg.speed != a.speed) a.constant_speed = false;
    }
    a.duration += seg.end - seg.start;
    a.energy += std::pow(rat_to_double(seg.speed), alpha) *
                rat_to_double(seg.end - seg.start);
  }

  RestrictedInstance restricted;
  restricted.jobs.resize(n);
  for (int j = 0; j < n; ++j) {
    const Job& job = instance.jobs[j];
    const auto& t = job.timing(pid);
    auto it = acc.find(job.id);
    if (it == acc.end() || !it->second.seen)
      throw ParameterError("preemptive schedule does not execute job " +
                           std::to_string(job.id));
    const Acc& a = it->second;

    RestrictedJob r;
    r.job_id = job.id;
    r.first_start = a.b;
    r.last_end = a.e;
    r.duration = a.duration;
    r.profile_energy = a.energy;

    // r'_j: smallest release whose window up to e_j swallows no other life
    // interval. The binding points are the other jobs' release dates.
    r.release = t.release;
    for (const auto& other : instance.jobs) {
      if (other.id == job.id) continue;
      const auto& ot = other.timing(pid);
      if (ot.deadline <= a.e && ot.release > r.release) r.release = ot.release;
    }
    if (r.release > a.b)
      throw InternalError("execution span of job " + std::to_string(job.id) +
                          " contains another job's life interval");

    // d'_j symmetrically, relative to the already fixed r'_j.
    r.deadline = t.deadline;
    for (const auto& other : instance.jobs) {
      if (other.id == job.id) continue;
      const auto& ot = other.timing(pid);
      if (ot.release > r.release && ot.deadline < r.deadline) r.deadline = ot.deadline;
    }
    if (r.deadline < a.e)
      throw InternalError("restricted deadline of job " + std::to_string(job.id) +
                          " cut into its execution span");

    // Contiguous processing time: keep the exact occupied duration when the
    // job already ran at one speed; otherwise use the duration that makes a
    // constant-speed run match the job's preemptive energy (slightly shorter,
    // so feasibility is preserved and energy is preserved exactly).
    if (a.constant_speed) {
      r.processing = a.duration;
    } else {
      const double w = rat_to_double(t.work);
      double p = std::pow(std::pow(w, alpha) / a.energy, 1.0 / (alpha - 1.0));
      Rat pr = rat_from_double(p);
      pr -= pr / (Rat(BigInt(1) << 40));  // shave below the exact value
      if (pr > a.duration) pr = a.duration;
      if (!(pr > 0)) throw InternalError("nonpositive processing time after rounding");
      r.processing = pr;
    }
    restricted.jobs[j] = std::move(r);
  }

  if (!is_agreeable(restricted.as_instance(instance)))
    throw InternalError("restricted instance is not agreeable");
  return restricted;
}

Instance RestrictedInstance::as_instance(const Instance& original) const {
  Instance out;
  out.mode = Mode::kSingle;
  out.processors = {original.solo_processor()};
  const int pid = out.processors.front().id;
  for (const auto& rj : jobs) {
    Job job;
    job.id = rj.job_id;
    const auto& t = original.jobs[original.job_index(rj.job_id)].timing(pid);
    job.on[pid] = {t.work, rj.release, rj.deadline};
    out.jobs.push_back(std::move(job));
  }
  return out;
}

Schedule edf_schedule(const Instance& instance, const RestrictedInstance& restricted) {
  const int pid = instance.solo_processor().id;

  std::vector<const RestrictedJob*> order;
  order.reserve(restricted.jobs.size());
  for (const auto& rj : restricted.jobs) order.push_back(&rj);
  std::sort(order.begin(), order.end(), [](const RestrictedJob* a, const RestrictedJob* b) {
    if (a->deadline != b->deadline) return a->deadline < b->deadline;
    if (a->release != b->release) return a->release < b->release;
    return a->job_id < b->job_id;
  });

  Schedule schedule;
  schedule.kind = ScheduleKind::kNonPreemptive;
  bool started = false;
  Rat cursor;
  for (const RestrictedJob* rj : order) {
    Rat start = rj->release;
    if (started && cursor > start) start = cursor;
    const Rat end = start + rj->processing;
    if (end > rj->deadline)
      throw InternalError("EDF on the restricted instance missed the deadline of job " +
                          std::to_string(rj->job_id) + ": end " + rat_str(end) +
                          " > d' " + rat_str(rj->deadline));
    const Rat work = instance.jobs[instance.job_index(rj->job_id)].timing(pid).work;
    schedule.segments.push_back({rj->job_id, pid, start, end, work / rj->processing});
    cursor = end;
    started = true;
  }
  return schedule;
}

SingleSolveResult solve_single(const Instance& instance, const Rat& epsilon,
                               std::uint64_t seed, int trials,
                               std::optional<long> slot_cap) {
  instance.validate();
  const int pid = instance.solo_processor().id;
  if (trials < 1) throw ParameterError("trials must be >= 1");

  SingleSolveResult result;
  const SlotGrid grid = build_grid(instance, pid, epsilon, slot_cap);
  result.slots_per_gap = grid.slots_per_gap;
  result.slot_cap_engaged = grid.capped;

  std::vector<std::vector<Configuration>> configs(instance.jobs.size());
  for (std::size_t j = 0; j < instance.jobs.size(); ++j)
    configs[j] = enumerate_configs(instance, pid, static_cast<int>(j), grid);

  const ConfigLp lp = build_lp(instance, {grid}, {configs});
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw InfeasibleError(
        "configuration LP infeasible at this granularity; retry with a larger "
        "epsilon or slot_cap");
  }
  result.lp_objective = sol.objective;
  result.lp_iterations = sol.iterations;
  result.lp_variables = lp.vars.size();

  bool have_best = false;
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = mix_seed(seed, trial);
    const RoundedChoice choice = round_configs(lp, sol, trial_seed);
    SpeedUpResult spr = speed_up(choice, grid, instance, lp, {configs});
    RestrictedInstance restricted = agreeable_restrict(instance, spr.schedule);
    Schedule npr = edf_schedule(instance, restricted);

    const double pr_energy = energy(spr.schedule, instance).total;
    const double npr_energy = energy(npr, instance).total;
    if (std::abs(npr_energy - pr_energy) > kEnergyRelTol * std::max(1.0, pr_energy))
      throw InternalError("energy not preserved by the EDF conversion");
    const auto report = verify(npr, instance, ScheduleKind::kNonPreemptive);
    if (!report.ok())
      throw InternalError("pipeline emitted an infeasible non-preemptive schedule: " +
                          report.violations.front().detail);

    result.trials.push_back({trial_seed, pr_energy, npr_energy});
    if (!have_best || npr_energy < result.energy) {
      have_best = true;
      result.energy = npr_energy;
      result.best_trial = trial;
      result.schedule = std::move(npr);
      result.preemptive = std::move(spr.schedule);
      result.restricted = std::move(restricted);
    }
  }
  return result;
}

}  // namespace speedscale
