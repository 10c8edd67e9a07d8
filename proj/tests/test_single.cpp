#include <doctest.h>

#include <cmath>
#include <map>

#include "speedscale/generate.hpp"
#include "speedscale/oracle.hpp"
#include "speedscale/single.hpp"
#include "speedscale/yds.hpp"
#include "test_support.hpp"

using namespace speedscale;
using namespace speedscale::test;

namespace {

struct Pipeline {
  SlotGrid grid;
  std::vector<std::vector<Configuration>> configs;
  ConfigLp lp;
  LpSolution sol;
};

Pipeline prepare(const Instance& inst, const Rat& eps, std::optional<long> cap) {
  Pipeline p;
  p.grid = build_grid(inst, inst.solo_processor().id, eps, cap);
  p.configs.resize(inst.jobs.size());
  for (std::size_t j = 0; j < inst.jobs.size(); ++j)
    p.configs[j] =
        enumerate_configs(inst, inst.solo_processor().id, static_cast<int>(j), p.grid);
  p.lp = build_lp(inst, {p.grid}, {p.configs});
  p.sol = solve_lp(p.lp);
  REQUIRE(p.sol.status == LpStatus::kOptimal);
  return p;
}

// Hand-built LP carrying explicit weights, for sampling tests.
ConfigLp fake_lp(const std::vector<int>& configs_per_job) {
  ConfigLp lp;
  lp.num_jobs = static_cast<int>(configs_per_job.size());
  lp.num_cap_rows = 1;
  lp.cap_row_offset = {0};
  lp.cap_rows_per_proc = {1};
  for (int j = 0; j < lp.num_jobs; ++j) {
    const int begin = static_cast<int>(lp.vars.size());
    for (int c = 0; c < configs_per_job[j]; ++c)
      lp.vars.push_back({j, 0, c, 0, 0, 1.0});
    lp.job_vars.push_back({begin, static_cast<int>(lp.vars.size())});
  }
  return lp;
}

}  // namespace

TEST_CASE("round: a weight-1 configuration is always chosen") {
  const ConfigLp lp = fake_lp({3});
  LpSolution sol;
  sol.status = LpStatus::kOptimal;
  sol.x = {0.0, 1.0, 0.0};
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    CHECK(round_configs(lp, sol, seed).var_of_job[0] == 1);
}

TEST_CASE("round: 0.5/0.5 weights split evenly over 10000 seeds") {
  const ConfigLp lp = fake_lp({2});
  LpSolution sol;
  sol.status = LpStatus::kOptimal;
  sol.x = {0.5, 0.5};
  int first = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed)
    if (round_configs(lp, sol, seed).var_of_job[0] == 0) ++first;
  const double freq = first / 10000.0;
  CHECK(freq > 0.48);
  CHECK(freq < 0.52);
}

TEST_CASE("round: two jobs choose independently (chi-square over 10000 trials)") {
  const ConfigLp lp = fake_lp({2, 2});
  LpSolution sol;
  sol.status = LpStatus::kOptimal;
  sol.x = {0.5, 0.5, 0.5, 0.5};
  int counts[2][2] = {{0, 0}, {0, 0}};
  const int trials = 10000;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    const RoundedChoice c = round_configs(lp, sol, seed);
    counts[c.var_of_job[0]][c.var_of_job[1] - 2]++;
  }
  double chi2 = 0.0;
  const double expected = trials / 4.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      chi2 += (counts[a][b] - expected) * (counts[a][b] - expected) / expected;
  CHECK(chi2 < 16.27);  // 99.9% quantile, 3 degrees of freedom
}

TEST_CASE("round rejects zero-weight jobs") {
  const ConfigLp lp = fake_lp({2});
  LpSolution sol;
  sol.status = LpStatus::kOptimal;
  sol.x = {0.0, 0.0};
  CHECK_THROWS_AS(round_configs(lp, sol, 1), InternalError);
}

TEST_CASE("speed_up: lone job runs at w/|c| and matches config_energy") {
  const Instance inst = single_instance({{3, 0, 2}});
  const Pipeline p = prepare(inst, Rat(1), std::nullopt);
  const RoundedChoice choice = round_configs(p.lp, p.sol, 5);
  const SpeedUpResult r = speed_up(choice, p.grid, inst, p.lp, {p.configs});
  const auto& config = p.configs[0][p.lp.vars[choice.var_of_job[0]].config_index];
  for (const auto& seg : r.schedule.segments)
    CHECK(seg.speed == inst.jobs[0].timing(0).work / config.length);
  CHECK(energy(r.schedule, inst).total ==
        doctest::Approx(config_energy(Rat(3), config.length, 2.0)));
}

TEST_CASE("speed_up: two unit jobs in one shared slot run at speed 2") {
  const Instance inst = single_instance({{1, 0, 1}, {1, 0, 1}}, 2.0);
  // Two slots so each job has a configuration; force both into slot 0.
  const SlotGrid grid = build_grid(inst, 0, Rat(1), 2);
  std::vector<std::pair<int, Configuration>> chosen = {
      {0, {0, 0, grid.slots[0].length()}},
      {1, {0, 0, grid.slots[0].length()}},
  };
  const SpeedUpResult r = speed_up_processor(inst, 0, grid, chosen);
  REQUIRE(r.profile.size() == 1);
  CHECK(r.profile[0].speed == Rat(4));  // each contributes 1/(1/2) = 2
  // slot energy: speed^2 * |t| = 16 * 1/2 = 8; with |c| = 1/2 per job
  CHECK(energy(r.schedule, inst).total == doctest::Approx(8.0));
  // serialized by job id inside the slot
  REQUIRE(r.schedule.segments.size() == 2);
  CHECK(r.schedule.segments[0].job == 1);
  CHECK(r.schedule.segments[1].job == 2);
  CHECK(r.schedule.segments[0].end == r.schedule.segments[1].start);
}

TEST_CASE("speed_up: disjoint configurations add their configuration energies") {
  const Instance inst = single_instance({{2, 0, 2}, {1, 2, 4}});
  const Pipeline p = prepare(inst, Rat(1), std::nullopt);
  const RoundedChoice choice = round_configs(p.lp, p.sol, 3);
  const SpeedUpResult r = speed_up(choice, p.grid, inst, p.lp, {p.configs});
  double expected = 0.0;
  for (int j = 0; j < 2; ++j) {
    const auto& var = p.lp.vars[choice.var_of_job[j]];
    expected += var.cost;
  }
  CHECK(energy(r.schedule, inst).total == doctest::Approx(expected));
}

TEST_CASE("speed_up: per-slot speed times length equals the slot work, exactly") {
  GenParams params;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = generate_instance(GenKind::kRandom, 5, 1, seed, params);
    Pipeline p = prepare(inst, Rat(1), 6);
    const RoundedChoice choice = round_configs(p.lp, p.sol, seed);
    const SpeedUpResult r = speed_up(choice, p.grid, inst, p.lp, {p.configs});
    for (const auto& load : r.profile) {
      Rat total = 0;
      for (const auto& [job, work] : load.work_of_job) total += work;
      CHECK(load.speed * p.grid.slots[load.slot].length() == total);
    }
    CHECK(verify(r.schedule, inst, ScheduleKind::kPreemptive).ok());
  }
}

TEST_CASE("agreeable_restrict reproduces the worked transformation example") {
  // Five jobs; executions taken from a preemptive schedule in which J1 runs in
  // two pieces around J3, and J4 runs to the right of J5.
  const Instance inst = single_instance(
      {{46, 5, 110}, {24, 10, 40}, {10, 30, 70}, {20, 60, 120}, {10, 80, 100}});
  Schedule pr{ScheduleKind::kPreemptive,
              {
                  seg(2, 0, Rat(10), Rat(34), Rat(1)),
                  seg(1, 0, Rat(34), Rat(60), Rat(1)),
                  seg(3, 0, Rat(60), Rat(70), Rat(1)),
                  seg(1, 0, Rat(70), Rat(90), Rat(1)),
                  seg(5, 0, Rat(90), Rat(100), Rat(1)),
                  seg(4, 0, Rat(100), Rat(120), Rat(1)),
              }};
  const RestrictedInstance restricted = agreeable_restrict(inst, pr);

  const std::map<int, std::pair<Rat, Rat>> expected = {
      {1, {Rat(30), Rat(100)}},  // shortened on both sides
      {2, {Rat(10), Rat(40)}},
      {3, {Rat(30), Rat(70)}},
      {4, {Rat(80), Rat(120)}},  // release moves right, past J5's release
      {5, {Rat(80), Rat(100)}},
  };
  for (const auto& rj : restricted.jobs) {
    CHECK(rj.release == expected.at(rj.job_id).first);
    CHECK(rj.deadline == expected.at(rj.job_id).second);
    CHECK(rj.release <= rj.first_start);
    CHECK(rj.last_end <= rj.deadline);
  }
  CHECK(is_agreeable(restricted.as_instance(inst)));
  // J4's restricted window no longer strictly contains J5's life interval.
}

TEST_CASE("agreeable_restrict: staggered agreeable instance is left unchanged") {
  const Instance inst = single_instance({{2, 0, 2}, {2, 1, 3}, {2, 2, 5}});
  Schedule pr{ScheduleKind::kPreemptive,
              {seg(1, 0, Rat(0), Rat(1), Rat(2)), seg(2, 0, Rat(1), Rat(2), Rat(2)),
               seg(3, 0, Rat(2), Rat(3), Rat(2))}};
  const RestrictedInstance restricted = agreeable_restrict(inst, pr);
  for (const auto& rj : restricted.jobs) {
    const auto& t = inst.jobs[inst.job_index(rj.job_id)].timing(0);
    CHECK(rj.release == t.release);
    CHECK(rj.deadline == t.deadline);
  }
}

TEST_CASE("agreeable_restrict: single job keeps its window") {
  const Instance inst = single_instance({{4, 1, 5}});
  Schedule pr{ScheduleKind::kPreemptive, {seg(1, 0, Rat(2), Rat(4), Rat(2))}};
  const RestrictedInstance restricted = agreeable_restrict(inst, pr);
  CHECK(restricted.jobs[0].release == Rat(1));
  CHECK(restricted.jobs[0].deadline == Rat(5));
  CHECK(restricted.jobs[0].processing == Rat(2));
}

TEST_CASE("edf_schedule packs by deadline at the earliest feasible start") {
  const Instance inst = single_instance({{1, 0, 1}, {1, 0, 2}});
  RestrictedInstance restricted;
  restricted.jobs = {
      {1, Rat(0), Rat(1), Rat(1), Rat(1), Rat(0), Rat(1), 1.0},
      {2, Rat(1), Rat(2), Rat(1), Rat(1), Rat(0), Rat(2), 1.0},
  };
  const Schedule s = edf_schedule(inst, restricted);
  REQUIRE(s.segments.size() == 2);
  CHECK(s.segments[0].job == 1);
  CHECK(s.segments[0].start == Rat(0));
  CHECK(s.segments[0].end == Rat(1));
  CHECK(s.segments[1].start == Rat(1));
  CHECK(s.segments[1].end == Rat(2));
}

TEST_CASE("edf_schedule starts a lone job as early as its window allows") {
  const Instance inst = single_instance({{4, 0, 3}});
  RestrictedInstance restricted;
  restricted.jobs = {{1, Rat(0), Rat(2), Rat(2), Rat(2), Rat(0), Rat(3), 8.0}};
  const Schedule s = edf_schedule(inst, restricted);
  REQUIRE(s.segments.size() == 1);
  CHECK(s.segments[0].start == Rat(0));
  CHECK(s.segments[0].end == Rat(2));
}

TEST_CASE("pipeline energy is preserved between preemptive and EDF schedules") {
  GenParams params;
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    for (double alpha : {1.5, 2.0, 3.0}) {
      params.alpha = alpha;
      const Instance inst = generate_instance(GenKind::kRandom, 5, 1, seed, params);
      Pipeline p = prepare(inst, Rat(1), 8);
      const RoundedChoice choice = round_configs(p.lp, p.sol, seed * 31);
      const SpeedUpResult spr = speed_up(choice, p.grid, inst, p.lp, {p.configs});
      const RestrictedInstance restricted = agreeable_restrict(inst, spr.schedule);
      const Schedule npr = edf_schedule(inst, restricted);

      const double pr = energy(spr.schedule, inst).total;
      const double np = energy(npr, inst).total;
      CHECK(std::abs(np - pr) <= 1e-9 * std::max(1.0, pr));
      CHECK(verify(npr, inst, ScheduleKind::kNonPreemptive).ok());
      CHECK(is_agreeable(restricted.as_instance(inst)));

      for (const auto& rj : restricted.jobs) {
        const auto& t = inst.jobs[inst.job_index(rj.job_id)].timing(0);
        CHECK(t.release <= rj.release);
        CHECK(rj.release <= rj.first_start);
        CHECK(rj.last_end <= rj.deadline);
        CHECK(rj.deadline <= t.deadline);
      }
    }
  }
}

TEST_CASE("solve_single: staggered pair matches the exact slot optimum and YDS") {
  const Instance inst = single_instance({{1, 0, 1}, {1, 0, 2}});
  const SingleSolveResult res = solve_single(inst, Rat(1), 17, 16, std::nullopt);
  const SlotGrid grid = build_grid(inst, 0, Rat(1), std::nullopt);
  const BruteForceResult exact = brute_force_single(inst, grid);
  CHECK(exact.energy == doctest::Approx(2.0));
  CHECK(res.energy == doctest::Approx(2.0));
  CHECK(yds_schedule(inst).energy == doctest::Approx(2.0));
}

TEST_CASE("solve_single: lone job uses its whole window") {
  const Instance inst = single_instance({{4, 0, 2}});
  const SingleSolveResult res = solve_single(inst, Rat(1), 3, 4, std::nullopt);
  CHECK(res.energy == doctest::Approx(8.0));
  REQUIRE(res.schedule.segments.size() == 1);
  CHECK(res.schedule.segments[0].start == Rat(0));
  CHECK(res.schedule.segments[0].end == Rat(2));
}

TEST_CASE("solve_single: sandwich and approximation bound on small batteries") {
  const double bound = std::pow(2.0, 2.0) * 2.0;  // (1+eps)^alpha * B~_2 at eps=1
  GenParams params;
  params.horizon = 5;
  params.max_len = 3;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = generate_instance(GenKind::kRandom, 4, 1, seed, params);
    const SlotGrid grid = build_grid(inst, 0, Rat(1), 3);
    if (grid.slot_count() > 60) continue;
    SingleSolveResult res;
    BruteForceResult exact;
    try {
      res = solve_single(inst, Rat(1), seed, 8, 3);
      exact = brute_force_single(inst, grid);
    } catch (const InfeasibleError&) {
      continue;
    }
    CHECK(res.lp_objective <= exact.energy * (1.0 + 1e-9));
    CHECK(exact.energy <= res.energy * (1.0 + 1e-9));
    CHECK(res.energy / res.lp_objective <= bound * (1.0 + 1e-9));
    CHECK(res.lp_objective <= res.energy * (1.0 + 1e-9));
  }
}

TEST_CASE("solve_single is deterministic for a fixed seed") {
  GenParams params;
  const Instance inst = generate_instance(GenKind::kNested, 5, 1, 23, params);
  const SingleSolveResult a = solve_single(inst, Rat(1), 99, 6, 6);
  const SingleSolveResult b = solve_single(inst, Rat(1), 99, 6, 6);
  CHECK(a.energy == b.energy);
  REQUIRE(a.schedule.segments.size() == b.schedule.segments.size());
  for (std::size_t i = 0; i < a.schedule.segments.size(); ++i) {
    CHECK(a.schedule.segments[i].start == b.schedule.segments[i].start);
    CHECK(a.schedule.segments[i].speed == b.schedule.segments[i].speed);
  }
}

TEST_CASE("solve_single reports infeasibility at too-coarse granularity") {
  const Instance inst = single_instance({{1, 0, 2}, {1, 0, 2}, {1, 0, 2}});
  CHECK_THROWS_AS(solve_single(inst, Rat(1), 1, 2, 2), InfeasibleError);
}
