#include <doctest.h>

#include <set>

#include "speedscale/discretize.hpp"
#include "speedscale/errors.hpp"
#include "speedscale/generate.hpp"
#include "test_support.hpp"

using namespace speedscale;
using namespace speedscale::test;

namespace {

// Independent re-enumeration: every consecutive slot run inside the job's
// window whose span does not (weakly) contain another job's life interval.
std::set<std::pair<int, int>> brute_force_runs(const Instance& inst, int job_index,
                                               const SlotGrid& grid) {
  const auto& t = inst.jobs[job_index].timing(0);
  std::set<std::pair<int, int>> runs;
  for (int first = 0; first < grid.slot_count(); ++first) {
    if (grid.slots[first].begin < t.release) continue;
    for (int last = first; last < grid.slot_count(); ++last) {
      if (grid.slots[last].end > t.deadline) break;
      bool contains_life = false;
      for (std::size_t k = 0; k < inst.jobs.size(); ++k) {
        if (static_cast<int>(k) == job_index) continue;
        const auto& ot = inst.jobs[k].timing(0);
        if (grid.slots[first].begin <= ot.release && ot.deadline <= grid.slots[last].end)
          contains_life = true;
      }
      if (!contains_life) runs.insert({first, last});
    }
  }
  return runs;
}

std::set<std::pair<int, int>> as_set(const std::vector<Configuration>& configs) {
  std::set<std::pair<int, int>> out;
  for (const auto& c : configs) out.insert({c.first_slot, c.last_slot});
  return out;
}

}  // namespace

TEST_CASE("landmarks: sorted deduplicated releases and deadlines") {
  CHECK(landmark_times(single_instance({{1, 0, 1}, {1, 0, 2}}), 0) ==
        std::vector<Rat>{Rat(0), Rat(1), Rat(2)});
  CHECK(landmark_times(single_instance({{1, 3, 7}}), 0) == std::vector<Rat>{Rat(3), Rat(7)});
  CHECK(landmark_times(single_instance({{1, 0, 2}, {1, 1, 2}}), 0) ==
        std::vector<Rat>{Rat(0), Rat(1), Rat(2)});
}

TEST_CASE("build_grid slot counts") {
  // n=2, eps=1: ceil(4 * 2) = 8 slots per gap; landmarks [0,1,2] give 16 slots
  const Instance two = single_instance({{1, 0, 1}, {1, 0, 2}});
  const SlotGrid g = build_grid(two, 0, Rat(1), std::nullopt);
  CHECK(g.slots_per_gap == 8);
  CHECK(g.slot_count() == 16);
  CHECK_FALSE(g.capped);

  // n=1, eps=1, one job [0,4]: 2 slots of length 2
  const Instance one = single_instance({{1, 0, 4}});
  const SlotGrid g1 = build_grid(one, 0, Rat(1), std::nullopt);
  CHECK(g1.slots_per_gap == 2);
  REQUIRE(g1.slot_count() == 2);
  CHECK(g1.slots[0].length() == Rat(2));
  CHECK(g1.slots[1].length() == Rat(2));

  // slot_cap clamps: n=10, eps=1/10 would need 1100 per gap
  Instance ten = single_instance({{1, 0, 4}});
  for (int i = 2; i <= 10; ++i) {
    Job j;
    j.id = i;
    j.on[0] = {Rat(1), Rat(0), Rat(4)};
    ten.jobs.push_back(j);
  }
  const SlotGrid g10 = build_grid(ten, 0, Rat(1, 10), 4);
  CHECK(g10.slots_per_gap == 4);
  CHECK(g10.capped);

  CHECK_THROWS_AS(build_grid(one, 0, Rat(0), std::nullopt), ParameterError);
  CHECK_THROWS_AS(build_grid(one, 0, Rat(-1), std::nullopt), ParameterError);
}

TEST_CASE("grid partition properties") {
  GenParams params;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = generate_instance(GenKind::kRandom, 5, 1, seed, params);
    const SlotGrid grid = build_grid(inst, 0, Rat(1, 2), 7);

    // slots partition [t_1, t_k] exactly, in rational arithmetic
    Rat total = 0;
    for (const auto& s : grid.slots) total += s.length();
    CHECK(total == grid.landmarks.back() - grid.landmarks.front());

    for (std::size_t i = 1; i < grid.slots.size(); ++i)
      CHECK(grid.slots[i].begin == grid.slots[i - 1].end);

    // every landmark is a slot boundary
    for (const auto& mark : grid.landmarks) {
      bool boundary = mark == grid.slots.front().begin || mark == grid.slots.back().end;
      for (const auto& s : grid.slots)
        if (s.begin == mark || s.end == mark) boundary = true;
      CHECK(boundary);
    }
  }
}

TEST_CASE("enumerate_configs: lone job gets all S(S+1)/2 runs") {
  const Instance one = single_instance({{1, 0, 4}});
  const SlotGrid g = build_grid(one, 0, Rat(1), std::nullopt);  // 2 slots
  CHECK(enumerate_configs(one, 0, 0, g).size() == 3);

  const SlotGrid g6 = build_grid(one, 0, Rat(1, 5), std::nullopt);  // 6 slots
  REQUIRE(g6.slot_count() == 6);
  CHECK(enumerate_configs(one, 0, 0, g6).size() == 6 * 7 / 2);
}

TEST_CASE("enumerate_configs: containment exclusion matches brute force") {
  // job A [0,4], job B [1,2]: runs of A spanning [1,2] entirely are excluded
  const Instance inst = single_instance({{1, 0, 4}, {1, 1, 2}});
  const SlotGrid grid = build_grid(inst, 0, Rat(1), 2);  // 2 slots per gap
  const auto configs = as_set(enumerate_configs(inst, 0, 0, grid));
  CHECK(configs == brute_force_runs(inst, 0, grid));
  for (const auto& [first, last] : configs) {
    const bool covers_b =
        grid.slots[first].begin <= Rat(1) && Rat(2) <= grid.slots[last].end;
    CHECK_FALSE(covers_b);
  }

  GenParams params;
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    for (auto kind : {GenKind::kRandom, GenKind::kNested}) {
      const Instance rnd = generate_instance(kind, 5, 1, seed, params);
      const SlotGrid g = build_grid(rnd, 0, Rat(1), 3);
      for (int j = 0; j < 5; ++j)
        CHECK(as_set(enumerate_configs(rnd, 0, j, g)) == brute_force_runs(rnd, j, g));
    }
  }
}

TEST_CASE("enumerate_configs: span length bookkeeping") {
  const Instance inst = single_instance({{1, 0, 4}, {1, 1, 2}});
  const SlotGrid grid = build_grid(inst, 0, Rat(1, 3), 5);
  for (int j = 0; j < 2; ++j) {
    for (const auto& c : enumerate_configs(inst, 0, j, grid)) {
      Rat sum = 0;
      for (int t = c.first_slot; t <= c.last_slot; ++t) sum += grid.slots[t].length();
      CHECK(c.length == sum);
      CHECK(c.length == grid.slots[c.last_slot].end - grid.slots[c.first_slot].begin);
    }
  }
}

TEST_CASE("enumerate_configs: adding a job never adds configurations") {
  GenParams params;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Instance inst = generate_instance(GenKind::kRandom, 4, 1, seed, params);
    Instance bigger = inst;
    Job extra;
    extra.id = 99;
    extra.on[0] = {Rat(1), Rat(seed % 5), Rat(seed % 5 + 2)};
    bigger.jobs.push_back(extra);
    bigger.validate();

    // Same landmark set so slot indices line up.
    bool same_grid = landmark_times(inst, 0) == landmark_times(bigger, 0);
    if (!same_grid) continue;
    const SlotGrid grid = build_grid(inst, 0, Rat(1), 4);
    const SlotGrid grid_big = build_grid(bigger, 0, Rat(1), 4);
    if (grid.slots_per_gap != grid_big.slots_per_gap) continue;
    for (int j = 0; j < 4; ++j) {
      const auto before = as_set(enumerate_configs(inst, 0, j, grid));
      const auto after = as_set(enumerate_configs(bigger, 0, j, grid_big));
      for (const auto& run : after) CHECK(before.count(run) == 1);
    }
  }
}

TEST_CASE("no configuration swallows a nested life interval (figure-style instance)") {
  // J1 [5,110], J2 [10,40], J3 [30,70], J4 [60,120], J5 [80,100]
  const Instance inst = single_instance(
      {{46, 5, 110}, {24, 10, 40}, {10, 30, 70}, {20, 60, 120}, {10, 80, 100}});
  const SlotGrid grid = build_grid(inst, 0, Rat(1), 2);
  for (int j : {0, 3}) {  // J1 and J4
    for (const auto& c : enumerate_configs(inst, 0, j, grid)) {
      const bool covers_j5 =
          grid.slots[c.first_slot].begin <= Rat(80) && Rat(100) <= grid.slots[c.last_slot].end;
      CHECK_FALSE(covers_j5);
    }
  }
}

TEST_CASE("config_energy") {
  CHECK(config_energy(Rat(2), Rat(1), 3.0) == doctest::Approx(8.0));
  CHECK(config_energy(Rat(4), Rat(2), 2.0) == doctest::Approx(8.0));
  for (double alpha : {1.2, 2.0, 2.9}) CHECK(config_energy(Rat(1), Rat(1), alpha) == doctest::Approx(1.0));
}
