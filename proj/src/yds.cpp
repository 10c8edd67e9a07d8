#include "speedscale/yds.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "speedscale/errors.hpp"

namespace speedscale {

namespace {

struct WorkItem {
  int id;
  Rat release;
  Rat deadline;
  Rat work;
  Rat remaining;
};

struct Piece {
  int job;
  Rat start, end;
  Rat speed;
};

// Preemptive EDF of `group` inside [a, b] at constant speed. Preempts only
// for strictly earlier deadlines; the interval must be exactly filled.
std::vector<Piece> edf_fill(std::vector<WorkItem> group, const Rat& a, const Rat& b,
                            const Rat& speed) {
  std::sort(group.begin(), group.end(), [](const WorkItem& x, const WorkItem& y) {
    if (x.release != y.release) return x.release < y.release;
    if (x.deadline != y.deadline) return x.deadline < y.deadline;
    return x.id < y.id;
  });

  std::vector<Piece> pieces;
  std::size_t next_arrival = 0;
  std::vector<WorkItem*> ready;
  WorkItem* current = nullptr;
  Rat t = a;

  auto release_up_to = [&](const Rat& time) {
    while (next_arrival < group.size() && group[next_arrival].release <= time)
      ready.push_back(&group[next_arrival++]);
  };

  while (true) {
    release_up_to(t);
    WorkItem* best = nullptr;
    for (WorkItem* w : ready) {
      if (w->remaining == 0) continue;
      if (!best || w->deadline < best->deadline ||
          (w->deadline == best->deadline && w->id < best->id)) {
        best = w;
      }
    }
    if (current && current->remaining > 0 && best && !(best->deadline < current->deadline))
      best = current;  // do not preempt on a deadline tie
    if (!best) {
      if (next_arrival >= group.size()) break;
      throw InternalError("idle time inside a critical interval");
    }
    current = best;

    const Rat completion = t + best->remaining / speed;
    Rat until = completion;
    if (next_arrival < group.size() && group[next_arrival].release < until)
      until = group[next_arrival].release;
    pieces.push_back({best->id, t, until, speed});
    best->remaining -= speed * (until - t);
    t = until;
  }
  if (t != b) throw InternalError("critical interval not exactly filled by EDF");
  return pieces;
}

}  // namespace

YdsResult yds_schedule(const Instance& instance) {
  instance.validate();
  const int pid = instance.solo_processor().id;
  const double alpha = instance.solo_processor().alpha;

  std::vector<WorkItem> pending;
  for (const auto& job : instance.jobs) {
    const auto& t = job.timing(pid);
    pending.push_back({job.id, t.release, t.deadline, t.work, t.work});
  }

  struct Cut {
    Rat at;      // position of the removed interval in its round's coordinates
    Rat width;
  };
  std::vector<Cut> cuts;
  // Pieces tagged with the round they were produced in.
  std::vector<std::pair<int, Piece>> raw;

  int round = 0;
  while (!pending.empty()) {
    std::vector<Rat> marks;
    for (const auto& w : pending) {
      marks.push_back(w.release);
      marks.push_back(w.deadline);
    }
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

    bool found = false;
    Rat best_a, best_b, best_density;
    for (std::size_t i = 0; i < marks.size(); ++i) {
      for (std::size_t k = i + 1; k < marks.size(); ++k) {
        Rat total = 0;
        for (const auto& w : pending)
          if (marks[i] <= w.release && w.deadline <= marks[k]) total += w.work;
        if (total == 0) continue;
        const Rat density = total / (marks[k] - marks[i]);
        if (!found || density > best_density ||
            (density == best_density &&
             (marks[i] < best_a || (marks[i] == best_a && marks[k] < best_b)))) {
          found = true;
          best_a = marks[i];
          best_b = marks[k];
          best_density = density;
        }
      }
    }
    if (!found) throw InternalError("no critical interval found with jobs pending");

    std::vector<WorkItem> group;
    std::vector<WorkItem> rest;
    for (const auto& w : pending) {
      if (best_a <= w.release && w.deadline <= best_b)
        group.push_back(w);
      else
        rest.push_back(w);
    }
    for (const auto& piece : edf_fill(group, best_a, best_b, best_density))
      raw.emplace_back(round, piece);

    // Contract [best_a, best_b] out of the timeline for the survivors.
    const Rat width = best_b - best_a;
    auto contract = [&](const Rat& t) -> Rat {
      if (t <= best_a) return t;
      if (t >= best_b) return t - width;
      return best_a;
    };
    for (auto& w : rest) {
      w.release = contract(w.release);
      w.deadline = contract(w.deadline);
    }
    cuts.push_back({best_a, width});
    pending = std::move(rest);
    ++round;
  }

  // Map pieces back to original time: re-open every earlier cut, splitting
  // pieces that straddle a reinserted interval.
  YdsResult result;
  result.schedule.kind = ScheduleKind::kPreemptive;
  for (const auto& [made_in, piece] : raw) {
    std::vector<Piece> spans = {piece};
    for (int c = made_in - 1; c >= 0; --c) {
      std::vector<Piece> next;
      for (const auto& p : spans) {
        if (p.end <= cuts[c].at) {
          next.push_back(p);
        } else if (p.start >= cuts[c].at) {
          next.push_back({p.job, p.start + cuts[c].width, p.end + cuts[c].width, p.speed});
        } else {
          next.push_back({p.job, p.start, cuts[c].at, p.speed});
          next.push_back({p.job, cuts[c].at + cuts[c].width, p.end + cuts[c].width, p.speed});
        }
      }
      spans = std::move(next);
    }
    for (const auto& p : spans)
      result.schedule.segments.push_back({p.job, pid, p.start, p.end, p.speed});
  }

  auto& segs = result.schedule.segments;
  std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) {
    return x.start < y.start;
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

  result.energy = energy(result.schedule, instance).total;
  return result;
}

}  // namespace speedscale
