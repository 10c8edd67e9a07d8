#include "speedscale/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "speedscale/errors.hpp"

namespace speedscale {

namespace {

constexpr double kWorkRelTol = 1e-6;

std::string rstr(const Rat& r) { return rat_str(r); }

}  // namespace

const JobTiming& Job::timing(int proc_id) const {
  auto it = on.find(proc_id);
  if (it == on.end()) {
    throw ReferenceError("job " + std::to_string(id) + " not eligible on processor " +
                         std::to_string(proc_id));
  }
  return it->second;
}

void Instance::validate() const {
  if (jobs.empty()) throw ParameterError("instance has no jobs");
  if (processors.empty()) throw ParameterError("instance has no processors");
  if (mode == Mode::kSingle && processors.size() != 1)
    throw ParameterError("single-mode instance must have exactly one processor");

  std::set<int> proc_ids;
  for (const auto& p : processors) {
    if (!(p.alpha > 1.0))
      throw ParameterError("processor " + std::to_string(p.id) + " needs alpha > 1");
    if (!proc_ids.insert(p.id).second)
      throw ParameterError("duplicate processor id " + std::to_string(p.id));
  }

  std::set<int> job_ids;
  for (const auto& j : jobs) {
    if (!job_ids.insert(j.id).second)
      throw ParameterError("duplicate job id " + std::to_string(j.id));
    if (j.on.empty())
      throw ParameterError("job " + std::to_string(j.id) + " is eligible on no processor");
    for (const auto& [pid, t] : j.on) {
      if (!proc_ids.count(pid))
        throw ParameterError("job " + std::to_string(j.id) + " references unknown processor " +
                             std::to_string(pid));
      if (!(t.work > 0))
        throw ParameterError("job " + std::to_string(j.id) + " has nonpositive work");
      if (!(t.release < t.deadline))
        throw ParameterError("job " + std::to_string(j.id) +
                             " has release >= deadline (infeasible: infinite speed)");
    }
  }
}

int Instance::job_index(int job_id) const {
  for (std::size_t i = 0; i < jobs.size(); ++i)
    if (jobs[i].id == job_id) return static_cast<int>(i);
  throw ReferenceError("unknown job id " + std::to_string(job_id));
}

int Instance::proc_index(int proc_id) const {
  for (std::size_t i = 0; i < processors.size(); ++i)
    if (processors[i].id == proc_id) return static_cast<int>(i);
  throw ReferenceError("unknown processor id " + std::to_string(proc_id));
}

const Processor& Instance::solo_processor() const {
  if (processors.size() != 1)
    throw ParameterError("operation requires a single-processor instance");
  return processors.front();
}

double Instance::alpha_max() const {
  double a = 0.0;
  for (const auto& p : processors) a = std::max(a, p.alpha);
  return a;
}

Instance restrict_to_processor(const Instance& instance, int proc_id) {
  const int pi = instance.proc_index(proc_id);
  Instance sub;
  sub.mode = Mode::kSingle;
  sub.processors = {instance.processors[pi]};
  for (const auto& j : instance.jobs) {
    if (!j.eligible(proc_id)) continue;
    Job copy;
    copy.id = j.id;
    copy.on[proc_id] = j.timing(proc_id);
    sub.jobs.push_back(std::move(copy));
  }
  return sub;
}

InstanceStats stats(const Instance& instance) {
  InstanceStats s;
  s.n = static_cast<int>(instance.jobs.size());
  s.m = static_cast<int>(instance.processors.size());
  s.alpha_max = instance.alpha_max();
  bool first = true;
  for (const auto& j : instance.jobs) {
    for (const auto& [pid, t] : j.on) {
      if (first || t.work > s.w_max) s.w_max = t.work;
      if (first || t.work < s.w_min) s.w_min = t.work;
      first = false;
    }
  }
  return s;
}

bool is_agreeable(const Instance& instance) {
  if (instance.mode != Mode::kSingle)
    throw ParameterError("is_agreeable is defined for single-mode instances");
  const int pid = instance.solo_processor().id;
  const int n = static_cast<int>(instance.jobs.size());
  for (int a = 0; a < n; ++a) {
    const auto& ta = instance.jobs[a].timing(pid);
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const auto& tb = instance.jobs[b].timing(pid);
      if (ta.release < tb.release && tb.deadline < ta.deadline) return false;
    }
  }
  return true;
}

EnergyReport energy(const Schedule& schedule, const Instance& instance) {
  EnergyReport report;
  for (const auto& p : instance.processors) report.per_processor[p.id] = 0.0;
  for (const auto& j : instance.jobs) report.per_job[j.id] = 0.0;

  for (const auto& seg : schedule.segments) {
    const int pi = instance.proc_index(seg.processor);  // throws ReferenceError
    (void)instance.job_index(seg.job);
    const double alpha = instance.processors[pi].alpha;
    const double e =
        std::pow(rat_to_double(seg.speed), alpha) * rat_to_double(seg.end - seg.start);
    report.per_processor[seg.processor] += e;
    report.per_job[seg.job] += e;
  }
  // The total is defined as the per-processor sum in ascending processor-id
  // order, so that multiprocessor decompositions are bit-identical.
  for (const auto& [pid, e] : report.per_processor) report.total += e;
  return report;
}

VerificationReport verify(const Schedule& schedule, const Instance& instance,
                          ScheduleKind kind) {
  VerificationReport report;
  auto add = [&](ViolationKind k, int job, int proc, std::string detail) {
    report.violations.push_back({k, job, proc, std::move(detail)});
  };

  // Reference and per-segment sanity checks; invalid segments are excluded
  // from the aggregate checks below.
  std::vector<const Segment*> good;
  for (const auto& seg : schedule.segments) {
    bool known = true;
    try {
      (void)instance.job_index(seg.job);
    } catch (const ReferenceError&) {
      add(ViolationKind::kReference, seg.job, -1, "unknown job id");
      known = false;
    }
    try {
      (void)instance.proc_index(seg.processor);
    } catch (const ReferenceError&) {
      add(ViolationKind::kReference, -1, seg.processor, "unknown processor id");
      known = false;
    }
    if (!known) continue;
    if (!(seg.start < seg.end) || !(seg.speed > 0)) {
      add(ViolationKind::kBadSegment, seg.job, seg.processor,
          "segment must have start < end and speed > 0");
      continue;
    }
    if (!instance.jobs[instance.job_index(seg.job)].eligible(seg.processor)) {
      add(ViolationKind::kLifeInterval, seg.job, seg.processor,
          "job not eligible on processor");
      continue;
    }
    const auto& t = instance.jobs[instance.job_index(seg.job)].timing(seg.processor);
    if (seg.start < t.release || seg.end > t.deadline) {
      add(ViolationKind::kLifeInterval, seg.job, seg.processor,
          "segment [" + rstr(seg.start) + ", " + rstr(seg.end) + "] outside life interval [" +
              rstr(t.release) + ", " + rstr(t.deadline) + "]");
      continue;
    }
    good.push_back(&seg);
  }

  // Overlaps per processor (open-interval intersection).
  std::map<int, std::vector<const Segment*>> by_proc;
  for (const auto* seg : good) by_proc[seg->processor].push_back(seg);
  for (auto& [pid, segs] : by_proc) {
    std::sort(segs.begin(), segs.end(), [](const Segment* a, const Segment* b) {
      if (a->start != b->start) return a->start < b->start;
      return a->end < b->end;
    });
    for (std::size_t i = 1; i < segs.size(); ++i) {
      if (segs[i]->start < segs[i - 1]->end) {
        add(ViolationKind::kOverlap, segs[i]->job, pid,
            "overlaps job " + std::to_string(segs[i - 1]->job) + " at " +
                rstr(segs[i]->start));
      }
    }
  }

  // Per-job accounting: migration, preemption, work completion.
  std::map<int, std::vector<const Segment*>> by_job;
  for (const auto* seg : good) by_job[seg->job].push_back(seg);
  for (const auto& job : instance.jobs) {
    auto it = by_job.find(job.id);
    if (it == by_job.end()) {
      add(ViolationKind::kWorkMismatch, job.id, -1, "job never executed");
      continue;
    }
    const auto& segs = it->second;
    std::set<int> procs;
    Rat executed = 0;
    for (const auto* s : segs) {
      procs.insert(s->processor);
      executed += s->executed_work();
    }
    if (procs.size() > 1) {
      add(ViolationKind::kMigration, job.id, -1,
          "job executes on " + std::to_string(procs.size()) + " processors");
      continue;
    }
    if (kind == ScheduleKind::kNonPreemptive && segs.size() > 1) {
      add(ViolationKind::kPreemption, job.id, *procs.begin(),
          "job split into " + std::to_string(segs.size()) + " segments");
    }
    const Rat required = job.timing(*procs.begin()).work;
    const double rel =
        std::abs(rat_to_double(executed - required)) / rat_to_double(required);
    if (rel > kWorkRelTol) {
      add(ViolationKind::kWorkMismatch, job.id, *procs.begin(),
          "executed " + rstr(executed) + ", required " + rstr(required));
    }
  }
  return report;
}

const char* violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kReference: return "reference";
    case ViolationKind::kBadSegment: return "bad-segment";
    case ViolationKind::kLifeInterval: return "life-interval";
    case ViolationKind::kOverlap: return "overlap";
    case ViolationKind::kWorkMismatch: return "work-mismatch";
    case ViolationKind::kPreemption: return "preemption";
    case ViolationKind::kMigration: return "migration";
  }
  return "unknown";
}

}  // namespace speedscale
