#include <doctest.h>

#include "speedscale/errors.hpp"
#include "speedscale/generate.hpp"
#include "speedscale/io.hpp"
#include "test_support.hpp"

using namespace speedscale;
using namespace speedscale::test;

namespace {

bool same_instance(const Instance& a, const Instance& b) {
  if (a.mode != b.mode || a.jobs.size() != b.jobs.size() ||
      a.processors.size() != b.processors.size())
    return false;
  for (std::size_t p = 0; p < a.processors.size(); ++p) {
    if (a.processors[p].id != b.processors[p].id) return false;
    if (a.processors[p].alpha != b.processors[p].alpha) return false;
  }
  for (std::size_t j = 0; j < a.jobs.size(); ++j) {
    if (a.jobs[j].id != b.jobs[j].id) return false;
    if (a.jobs[j].on.size() != b.jobs[j].on.size()) return false;
    for (const auto& [pid, t] : a.jobs[j].on) {
      if (!b.jobs[j].eligible(pid)) return false;
      const auto& u = b.jobs[j].timing(pid);
      if (t.work != u.work || t.release != u.release || t.deadline != u.deadline)
        return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rat("3/2") == Rat(3, 2));
  CHECK(parse_rat("5") == Rat(5));
  CHECK(parse_rat("-7/4") == Rat(-7, 4));
  CHECK(parse_rat("0.25") == Rat(1, 4));
  CHECK(parse_rat("1.5") == Rat(3, 2));
  CHECK(rat_str(Rat(6, 4)) == "3/2");
  CHECK(rat_str(Rat(5)) == "5/1");
  CHECK_THROWS_AS(parse_rat("1/0"), ParameterError);
  CHECK_THROWS_AS(parse_rat("a/b"), ParameterError);
  CHECK_THROWS_AS(parse_rat(""), ParameterError);
  CHECK(parse_rat(rat_str(Rat(22, 7))) == Rat(22, 7));
}

TEST_CASE("instance round trip, single and multi") {
  GenParams params;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (int m : {1, 3}) {
      const Instance inst = generate_instance(GenKind::kRandom, 5, m, seed, params);
      const std::string text = instance_to_json(inst);
      const Instance back = instance_from_json(text);
      CHECK(same_instance(inst, back));
      CHECK(instance_to_json(back) == text);  // canonical form is stable
    }
  }
}

TEST_CASE("instance round trip preserves awkward rationals") {
  Instance inst;
  inst.mode = Mode::kSingle;
  inst.processors = {{0, 2.25}};
  Job j;
  j.id = 7;
  j.on[0] = {Rat(22, 7), Rat(1, 3), Rat(355, 113)};
  inst.jobs.push_back(j);
  inst.validate();
  const Instance back = instance_from_json(instance_to_json(inst));
  CHECK(back.jobs[0].on.at(0).work == Rat(22, 7));
  CHECK(back.jobs[0].on.at(0).release == Rat(1, 3));
  CHECK(back.jobs[0].on.at(0).deadline == Rat(355, 113));
}

TEST_CASE("unknown fields and malformed instances are rejected") {
  const Instance inst = single_instance({{1, 0, 2}});
  std::string text = instance_to_json(inst);

  CHECK_THROWS_AS(instance_from_json("{"), IoError);
  CHECK_THROWS_AS(instance_from_json("[]"), IoError);

  std::string extra = text;
  extra.insert(extra.find("\"mode\""), "\"comment\": \"hi\",\n  ");
  CHECK_THROWS_AS(instance_from_json(extra), IoError);

  std::string bad_version = text;
  bad_version.replace(bad_version.find("\"version\": 1"), 12, "\"version\": 9");
  CHECK_THROWS_AS(instance_from_json(bad_version), IoError);

  // release == deadline rejected at parse time
  std::string degenerate = text;
  degenerate.replace(degenerate.find("\"deadline\": \"2/1\""), 17, "\"deadline\": \"0/1\"");
  CHECK_THROWS_AS(instance_from_json(degenerate), IoError);
}

TEST_CASE("schedule round trip with metadata") {
  const Instance inst = single_instance({{2, 0, 2}});
  Schedule s{ScheduleKind::kNonPreemptive, {seg(1, 0, Rat(0), Rat(2), Rat(1))}};
  SolveMeta meta;
  meta.lp_objective = 2.0;
  meta.seed = 42;
  meta.epsilon = Rat(1, 2);
  meta.slot_cap = 20;
  meta.trials = 8;
  meta.backend = "pipeline";
  meta.bound_report["single_abstract"] = 8.0;

  const std::string text = schedule_to_json(s, inst, meta);
  const ScheduleFile file = schedule_from_json(text);
  CHECK(file.instance_checksum == instance_checksum(inst));
  CHECK(file.schedule.kind == ScheduleKind::kNonPreemptive);
  REQUIRE(file.schedule.segments.size() == 1);
  CHECK(file.schedule.segments[0].end == Rat(2));
  CHECK(file.schedule.segments[0].speed == Rat(1));
  CHECK(file.meta.lp_objective == 2.0);
  CHECK(file.meta.seed == 42);
  CHECK(file.meta.epsilon == Rat(1, 2));
  REQUIRE(file.meta.slot_cap.has_value());
  CHECK(*file.meta.slot_cap == 20);
  CHECK(file.meta.backend == "pipeline");
  CHECK(file.meta.bound_report.at("single_abstract") == 8.0);

  // verify() accepts what came back
  CHECK(verify(file.schedule, inst, file.schedule.kind).ok());
}

TEST_CASE("checksums differ across instances and are stable") {
  const Instance a = single_instance({{1, 0, 2}});
  const Instance b = single_instance({{2, 0, 2}});
  CHECK(instance_checksum(a) == instance_checksum(a));
  CHECK(instance_checksum(a) != instance_checksum(b));
  CHECK(instance_checksum(a).size() == 16);
}
