#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "speedscale/model.hpp"

namespace speedscale {

// Versioned JSON instance format. Processors are numbered 0..m-1; rationals
// travel as canonical "p/q" strings so boundaries survive round trips exactly.
std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);

// FNV-1a 64 over the canonical instance serialization, hex-encoded.
std::string instance_checksum(const Instance& instance);

struct SolveMeta {
  double lp_objective = 0.0;
  std::uint64_t seed = 0;
  Rat epsilon = 1;
  std::optional<long> slot_cap;
  int trials = 1;
  std::string backend;
  std::map<std::string, double> bound_report;
};

std::string schedule_to_json(const Schedule& schedule, const Instance& instance,
                             const SolveMeta& meta);

struct ScheduleFile {
  Schedule schedule;
  std::string instance_checksum;
  SolveMeta meta;
};

ScheduleFile schedule_from_json(const std::string& text);

std::string read_file(const std::string& path);        // IoError on failure
void write_file(const std::string& path, const std::string& content);

}  // namespace speedscale
