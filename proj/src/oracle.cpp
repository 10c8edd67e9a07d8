#include "speedscale/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "speedscale/errors.hpp"

namespace speedscale {

BellTilde bell_tilde(double alpha, double tol) {
  if (!(alpha > 0)) throw ParameterError("bell_tilde requires alpha > 0");
  if (!(tol > 0)) throw ParameterError("bell_tilde requires tol > 0");

  BellTilde out;
  out.alpha = alpha;
  double sum = 0.0;  // k = 0 term is 0 for alpha > 0
  int k = 0;
  double term = 0.0;
  double ratio = 1.0;
  while (true) {
    ++k;
    term = std::exp(alpha * std::log(static_cast<double>(k)) - 1.0 -
                    std::lgamma(static_cast<double>(k) + 1.0));
    sum += term;
    // term_{k+1}/term_k = ((k+1)/k)^alpha / (k+1), decreasing in k.
    ratio = std::pow((k + 1.0) / k, alpha) / (k + 1.0);
    if (k > alpha && k > 2 && ratio < 0.5 && term < tol * 1e-2) break;
    if (k > 10000) throw InternalError("bell_tilde series failed to converge");
  }
  out.value = sum;
  out.terms_used = k;
  out.truncation_bound = term * ratio / (1.0 - ratio);
  return out;
}

namespace {

struct BruteJob {
  int job_index;
  std::vector<Configuration> configs;  // sorted by energy ascending
  std::vector<double> energies;
  double cheapest = 0.0;
};

}  // namespace

BruteForceResult brute_force_single(const Instance& instance, const SlotGrid& grid) {
  instance.validate();
  const int pid = instance.solo_processor().id;
  const double alpha = instance.solo_processor().alpha;
  const int n = static_cast<int>(instance.jobs.size());
  if (n > 6) throw ParameterError("brute_force_single refuses more than 6 jobs");
  if (grid.slot_count() > 60)
    throw ParameterError("brute_force_single refuses more than 60 slots");

  std::vector<BruteJob> order(n);
  for (int j = 0; j < n; ++j) {
    order[j].job_index = j;
    order[j].configs = enumerate_configs(instance, pid, j, grid);
    if (order[j].configs.empty())
      throw InfeasibleError("job " + std::to_string(instance.jobs[j].id) +
                            " has no configuration on this grid");
    const Rat& w = instance.jobs[j].timing(pid).work;
    for (const auto& c : order[j].configs)
      order[j].energies.push_back(config_energy(w, c.length, alpha));
    std::vector<std::size_t> perm(order[j].configs.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      if (order[j].energies[a] != order[j].energies[b])
        return order[j].energies[a] < order[j].energies[b];
      return a < b;
    });
    std::vector<Configuration> cs;
    std::vector<double> es;
    for (auto i : perm) {
      cs.push_back(order[j].configs[i]);
      es.push_back(order[j].energies[i]);
    }
    order[j].configs = std::move(cs);
    order[j].energies = std::move(es);
    order[j].cheapest = order[j].energies.front();
  }
  // Fewest configurations first: fail fast on the most constrained jobs.
  std::sort(order.begin(), order.end(), [](const BruteJob& a, const BruteJob& b) {
    if (a.configs.size() != b.configs.size()) return a.configs.size() < b.configs.size();
    return a.job_index < b.job_index;
  });

  std::vector<double> tail_bound(n + 1, 0.0);
  for (int j = n - 1; j >= 0; --j) tail_bound[j] = tail_bound[j + 1] + order[j].cheapest;

  std::vector<char> used(grid.slot_count(), 0);
  std::vector<int> pick(n, -1);
  std::vector<int> best_pick;
  double best = std::numeric_limits<double>::infinity();

  auto dfs = [&](auto&& self, int depth, double partial) -> void {
    if (partial + tail_bound[depth] >= best - 1e-12) return;
    if (depth == n) {
      best = partial;
      best_pick.assign(pick.begin(), pick.end());
      return;
    }
    const BruteJob& bj = order[depth];
    for (std::size_t ci = 0; ci < bj.configs.size(); ++ci) {
      const auto& c = bj.configs[ci];
      bool free = true;
      for (int t = c.first_slot; t <= c.last_slot && free; ++t)
        if (used[t]) free = false;
      if (!free) continue;
      for (int t = c.first_slot; t <= c.last_slot; ++t) used[t] = 1;
      pick[depth] = static_cast<int>(ci);
      self(self, depth + 1, partial + bj.energies[ci]);
      for (int t = c.first_slot; t <= c.last_slot; ++t) used[t] = 0;
      pick[depth] = -1;
    }
  };
  dfs(dfs, 0, 0.0);

  if (best_pick.empty())
    throw InfeasibleError("no disjoint configuration assignment exists on this grid");

  BruteForceResult result;
  result.energy = best;
  result.schedule.kind = ScheduleKind::kNonPreemptive;
  for (int d = 0; d < n; ++d) {
    const BruteJob& bj = order[d];
    const auto& c = bj.configs[best_pick[d]];
    const Job& job = instance.jobs[bj.job_index];
    const Rat speed = job.timing(pid).work / c.length;
    result.schedule.segments.push_back(
        {job.id, pid, grid.slots[c.first_slot].begin, grid.slots[c.last_slot].end, speed});
  }
  std::sort(result.schedule.segments.begin(), result.schedule.segments.end(),
            [](const Segment& a, const Segment& b) { return a.start < b.start; });
  return result;
}

std::optional<Schedule> random_feasible_preemptive(const Instance& instance,
                                                   std::uint64_t seed) {
  instance.validate();
  const int pid = instance.solo_processor().id;

  std::vector<Rat> marks;
  for (const auto& job : instance.jobs) {
    marks.push_back(job.timing(pid).release);
    marks.push_back(job.timing(pid).deadline);
  }
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  const std::size_t gaps = marks.size() - 1;
  if (gaps == 0) return std::nullopt;

  std::mt19937_64 rng(seed);
  std::vector<Rat> profile(gaps);
  for (auto& u : profile) u = Rat(97 + static_cast<long>(rng() % 98), 97);

  struct Sim {
    int id;
    Rat release, deadline, remaining;
  };

  // Event-driven preemptive EDF under the scaled profile; events happen at
  // landmarks and completions, so deadline misses surface at landmarks.
  auto simulate = [&](const Rat& scale, Schedule* out) -> bool {
    std::vector<Sim> jobs;
    for (const auto& job : instance.jobs) {
      const auto& t = job.timing(pid);
      jobs.push_back({job.id, t.release, t.deadline, t.work});
    }
    std::sort(jobs.begin(), jobs.end(), [](const Sim& a, const Sim& b) {
      if (a.release != b.release) return a.release < b.release;
      return a.id < b.id;
    });

    std::size_t arrived = 0;
    std::size_t gap = 0;
    Rat t = marks.front();
    int done = 0;
    const int total = static_cast<int>(jobs.size());
    const Sim* current = nullptr;

    while (done < total) {
      while (arrived < jobs.size() && jobs[arrived].release <= t) ++arrived;
      Sim* best = nullptr;
      for (std::size_t i = 0; i < arrived; ++i) {
        Sim& s = jobs[i];
        if (s.remaining == 0) continue;
        if (s.deadline <= t) return false;  // missed
        if (!best || s.deadline < best->deadline ||
            (s.deadline == best->deadline && s.id < best->id))
          best = &s;
      }
      if (best && current && current->remaining > 0 &&
          !(best->deadline < current->deadline))
        best = const_cast<Sim*>(current);

      if (!best) {
        if (arrived >= jobs.size()) return false;  // work left, nothing released
        t = jobs[arrived].release;
        while (gap + 1 < gaps && marks[gap + 1] <= t) ++gap;
        continue;
      }
      if (gap >= gaps) return false;  // past the horizon with work remaining
      while (marks[gap + 1] <= t) {
        ++gap;
        if (gap >= gaps) return false;
      }

      const Rat speed = scale * profile[gap];
      Rat until = t + best->remaining / speed;
      if (marks[gap + 1] < until) until = marks[gap + 1];
      if (arrived < jobs.size() && jobs[arrived].release < until)
        until = jobs[arrived].release;

      if (out) out->segments.push_back({best->id, pid, t, until, speed});
      best->remaining -= speed * (until - t);
      if (best->remaining == 0) {
        if (best->deadline < until) return false;
        ++done;
      }
      current = best;
      t = until;
    }
    return true;
  };

  Rat scale = 1;
  for (int attempt = 0; attempt < 64; ++attempt) {
    if (simulate(scale, nullptr)) {
      Schedule schedule;
      schedule.kind = ScheduleKind::kPreemptive;
      simulate(scale, &schedule);
      // Merge touching same-speed pieces of one job.
      std::vector<Segment> merged;
      for (const auto& seg : schedule.segments) {
        if (!merged.empty() && merged.back().job == seg.job &&
            merged.back().speed == seg.speed && merged.back().end == seg.start) {
          merged.back().end = seg.end;
        } else {
          merged.push_back(seg);
        }
      }
      schedule.segments = std::move(merged);
      return schedule;
    }
    scale *= 2;
  }
  return std::nullopt;
}

}  // namespace speedscale
