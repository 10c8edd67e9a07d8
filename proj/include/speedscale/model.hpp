#pragma once

#include <map>
#include <string>
#include <vector>

#include "speedscale/rational.hpp"

namespace speedscale {

// Work/release/deadline of one job on one processor.
struct JobTiming {
  Rat work;
  Rat release;
  Rat deadline;
};

// A job is eligible exactly on the processors present in `on`. Single-mode
// instances carry one entry per job (the lone processor).
struct Job {
  int id = 0;
  std::map<int, JobTiming> on;  // processor id -> parameters

  bool eligible(int proc_id) const { return on.count(proc_id) != 0; }
  const JobTiming& timing(int proc_id) const;
};

struct Processor {
  int id = 0;
  double alpha = 2.0;  // power exponent, > 1
};

enum class Mode { kSingle, kMulti };

struct InstanceStats {
  int n = 0;
  int m = 0;
  Rat w_max;
  Rat w_min;
  double alpha_max = 0.0;
};

struct Instance {
  Mode mode = Mode::kSingle;
  std::vector<Job> jobs;
  std::vector<Processor> processors;

  // Throws ParameterError on any structural violation (empty sets, alpha <= 1,
  // nonpositive work, release >= deadline, job eligible nowhere, dup ids).
  void validate() const;

  int job_index(int job_id) const;    // ReferenceError if unknown
  int proc_index(int proc_id) const;  // ReferenceError if unknown

  // Single-mode helpers.
  const Processor& solo_processor() const;
  const JobTiming& timing(const Job& job) const { return job.timing(solo_processor().id); }

  double alpha_max() const;
};

// Single-mode view of one processor of a multi instance: jobs eligible there,
// with their parameters on that processor, original ids and order kept.
Instance restrict_to_processor(const Instance& instance, int proc_id);

InstanceStats stats(const Instance& instance);

// True iff no pair of jobs is strictly nested: r_j < r_j' implies d_j <= d_j'.
// Pairs with equal releases never disagree. Single mode only.
bool is_agreeable(const Instance& instance);

// One maximal constant-speed execution piece.
struct Segment {
  int job = 0;
  int processor = 0;
  Rat start;
  Rat end;
  Rat speed;

  Rat executed_work() const { return speed * (end - start); }
};

enum class ScheduleKind { kPreemptive, kNonPreemptive };

struct Schedule {
  ScheduleKind kind = ScheduleKind::kPreemptive;
  std::vector<Segment> segments;
};

struct EnergyReport {
  double total = 0.0;
  std::map<int, double> per_processor;
  std::map<int, double> per_job;
};

// Energy of a schedule under P(s) = s^alpha_i per processor.
// Throws ReferenceError for unknown job/processor ids.
EnergyReport energy(const Schedule& schedule, const Instance& instance);

enum class ViolationKind {
  kReference,      // unknown job or processor id
  kBadSegment,     // start >= end or speed <= 0
  kLifeInterval,   // segment outside [r, d] on its processor
  kOverlap,        // two segments overlap on one processor
  kWorkMismatch,   // executed work != required work beyond tolerance
  kPreemption,     // > 1 segment per job under non-preemptive kind
  kMigration,      // job segments on more than one processor
};

struct Violation {
  ViolationKind kind;
  int job = -1;        // -1 when not job-specific
  int processor = -1;  // -1 when not processor-specific
  std::string detail;
};

struct VerificationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks feasibility of `schedule` against `instance`; violations (never
// exceptions) describe every problem found. Work completion is compared with
// relative tolerance 1e-6; interval checks are exact rational comparisons.
VerificationReport verify(const Schedule& schedule, const Instance& instance,
                          ScheduleKind kind);

const char* violation_kind_name(ViolationKind kind);

}  // namespace speedscale
