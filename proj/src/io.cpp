#include "speedscale/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "speedscale/errors.hpp"

namespace speedscale {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

void require_keys(const Json& object, const std::set<std::string>& allowed,
                  const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.count(key))
      throw IoError("unknown field '" + key + "' in " + where);
  }
}

void check_processor_numbering(const Instance& instance) {
  for (std::size_t p = 0; p < instance.processors.size(); ++p) {
    if (instance.processors[p].id != static_cast<int>(p))
      throw ParameterError("file format requires processors numbered 0..m-1");
  }
}

Json rat_field(const Rat& r) { return rat_str(r); }

Rat parse_rat_field(const Json& j, const std::string& where) {
  if (!j.is_string()) throw IoError(where + " must be a \"p/q\" string");
  try {
    return parse_rat(j.get<std::string>());
  } catch (const ParameterError& e) {
    throw IoError(where + ": " + e.what());
  }
}

}  // namespace

std::string instance_to_json(const Instance& instance) {
  instance.validate();
  check_processor_numbering(instance);

  Json root;
  root["version"] = kFormatVersion;
  root["mode"] = instance.mode == Mode::kSingle ? "single" : "multi";
  if (instance.mode == Mode::kSingle) {
    root["alpha"] = instance.processors.front().alpha;
  } else {
    Json alphas = Json::array();
    for (const auto& p : instance.processors) alphas.push_back(p.alpha);
    root["alpha"] = alphas;
  }
  Json jobs = Json::array();
  for (const auto& job : instance.jobs) {
    Json entry;
    entry["id"] = job.id;
    if (instance.mode == Mode::kSingle) {
      const auto& t = job.on.begin()->second;
      entry["work"] = rat_field(t.work);
      entry["release"] = rat_field(t.release);
      entry["deadline"] = rat_field(t.deadline);
    } else {
      Json work, release, deadline;
      for (const auto& [pid, t] : job.on) {
        const std::string key = std::to_string(pid);
        work[key] = rat_field(t.work);
        release[key] = rat_field(t.release);
        deadline[key] = rat_field(t.deadline);
      }
      entry["work"] = work;
      entry["release"] = release;
      entry["deadline"] = deadline;
    }
    jobs.push_back(entry);
  }
  root["jobs"] = jobs;
  return root.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw IoError("instance file must be a JSON object");
  require_keys(root, {"version", "mode", "alpha", "jobs"}, "instance");
  if (!root.contains("version") || !root["version"].is_number_integer() ||
      root["version"].get<int>() != kFormatVersion)
    throw IoError("unsupported or missing instance format version");
  if (!root.contains("mode") || !root["mode"].is_string())
    throw IoError("instance needs a mode of \"single\" or \"multi\"");

  Instance inst;
  const std::string mode = root["mode"].get<std::string>();
  if (mode == "single")
    inst.mode = Mode::kSingle;
  else if (mode == "multi")
    inst.mode = Mode::kMulti;
  else
    throw IoError("mode must be \"single\" or \"multi\"");

  if (!root.contains("alpha")) throw IoError("instance needs an alpha field");
  if (inst.mode == Mode::kSingle) {
    if (!root["alpha"].is_number()) throw IoError("single-mode alpha must be a number");
    inst.processors.push_back({0, root["alpha"].get<double>()});
  } else {
    if (!root["alpha"].is_array() || root["alpha"].empty())
      throw IoError("multi-mode alpha must be a non-empty list of numbers");
    int pid = 0;
    for (const auto& a : root["alpha"]) {
      if (!a.is_number()) throw IoError("multi-mode alpha entries must be numbers");
      inst.processors.push_back({pid++, a.get<double>()});
    }
  }

  if (!root.contains("jobs") || !root["jobs"].is_array() || root["jobs"].empty())
    throw IoError("instance needs a non-empty jobs list");
  for (const auto& entry : root["jobs"]) {
    if (!entry.is_object()) throw IoError("each job must be an object");
    require_keys(entry, {"id", "work", "release", "deadline"}, "job");
    for (const char* field : {"id", "work", "release", "deadline"})
      if (!entry.contains(field))
        throw IoError(std::string("job missing field '") + field + "'");
    if (!entry["id"].is_number_integer()) throw IoError("job id must be an integer");

    Job job;
    job.id = entry["id"].get<int>();
    const std::string where = "job " + std::to_string(job.id);
    if (inst.mode == Mode::kSingle) {
      job.on[0] = {parse_rat_field(entry["work"], where + " work"),
                   parse_rat_field(entry["release"], where + " release"),
                   parse_rat_field(entry["deadline"], where + " deadline")};
    } else {
      const auto& work = entry["work"];
      const auto& release = entry["release"];
      const auto& deadline = entry["deadline"];
      if (!work.is_object() || !release.is_object() || !deadline.is_object())
        throw IoError(where + ": multi-mode work/release/deadline must be maps");
      for (const auto& [key, value] : work.items()) {
        int pid = 0;
        try {
          pid = std::stoi(key);
        } catch (const std::exception&) {
          throw IoError(where + ": processor key '" + key + "' is not an integer");
        }
        if (!release.contains(key) || !deadline.contains(key))
          throw IoError(where + ": processor " + key +
                        " needs work, release and deadline");
        job.on[pid] = {parse_rat_field(value, where + " work"),
                       parse_rat_field(release[key], where + " release"),
                       parse_rat_field(deadline[key], where + " deadline")};
      }
      if (release.size() != work.size() || deadline.size() != work.size())
        throw IoError(where + ": work/release/deadline maps disagree on processors");
    }
    inst.jobs.push_back(std::move(job));
  }

  try {
    inst.validate();
    check_processor_numbering(inst);
  } catch (const ParameterError& e) {
    throw IoError(std::string("invalid instance: ") + e.what());
  }
  return inst;
}

std::string instance_checksum(const Instance& instance) {
  const std::string canonical = instance_to_json(instance);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  std::ostringstream out;
  out << std::hex;
  for (int shift = 60; shift >= 0; shift -= 4) out << ((hash >> shift) & 0xF);
  return out.str();
}

std::string schedule_to_json(const Schedule& schedule, const Instance& instance,
                             const SolveMeta& meta) {
  Json root;
  root["version"] = kFormatVersion;
  root["instance_checksum"] = instance_checksum(instance);
  root["kind"] = schedule.kind == ScheduleKind::kNonPreemptive ? "non-preemptive"
                                                               : "preemptive";
  Json segments = Json::array();
  for (const auto& seg : schedule.segments) {
    Json s;
    s["job"] = seg.job;
    s["processor"] = seg.processor;
    s["start"] = rat_field(seg.start);
    s["end"] = rat_field(seg.end);
    s["speed"] = rat_field(seg.speed);
    segments.push_back(s);
  }
  root["segments"] = segments;

  Json m;
  m["lp_objective"] = meta.lp_objective;
  m["seed"] = meta.seed;
  m["epsilon"] = rat_field(meta.epsilon);
  if (meta.slot_cap)
    m["slot_cap"] = *meta.slot_cap;
  else
    m["slot_cap"] = nullptr;
  m["trials"] = meta.trials;
  m["backend"] = meta.backend;
  Json bounds;
  for (const auto& [name, value] : meta.bound_report) bounds[name] = value;
  m["bound_report"] = bounds;
  root["metadata"] = m;
  return root.dump(2) + "\n";
}

ScheduleFile schedule_from_json(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw IoError("schedule file must be a JSON object");
  require_keys(root, {"version", "instance_checksum", "kind", "segments", "metadata"},
               "schedule");
  if (!root.contains("version") || root["version"].get<int>() != kFormatVersion)
    throw IoError("unsupported or missing schedule format version");
  ScheduleFile file;
  if (!root.contains("instance_checksum") || !root["instance_checksum"].is_string())
    throw IoError("schedule needs an instance_checksum");
  file.instance_checksum = root["instance_checksum"].get<std::string>();
  const std::string kind = root.value("kind", "");
  if (kind == "non-preemptive")
    file.schedule.kind = ScheduleKind::kNonPreemptive;
  else if (kind == "preemptive")
    file.schedule.kind = ScheduleKind::kPreemptive;
  else
    throw IoError("kind must be \"preemptive\" or \"non-preemptive\"");

  if (!root.contains("segments") || !root["segments"].is_array())
    throw IoError("schedule needs a segments list");
  for (const auto& s : root["segments"]) {
    require_keys(s, {"job", "processor", "start", "end", "speed"}, "segment");
    Segment seg;
    seg.job = s.at("job").get<int>();
    seg.processor = s.at("processor").get<int>();
    seg.start = parse_rat_field(s.at("start"), "segment start");
    seg.end = parse_rat_field(s.at("end"), "segment end");
    seg.speed = parse_rat_field(s.at("speed"), "segment speed");
    file.schedule.segments.push_back(std::move(seg));
  }

  if (root.contains("metadata")) {
    const auto& m = root["metadata"];
    require_keys(m, {"lp_objective", "seed", "epsilon", "slot_cap", "trials", "backend",
                     "bound_report"},
                 "metadata");
    file.meta.lp_objective = m.value("lp_objective", 0.0);
    file.meta.seed = m.value("seed", std::uint64_t{0});
    if (m.contains("epsilon")) file.meta.epsilon = parse_rat_field(m["epsilon"], "epsilon");
    if (m.contains("slot_cap") && !m["slot_cap"].is_null())
      file.meta.slot_cap = m["slot_cap"].get<long>();
    file.meta.trials = m.value("trials", 1);
    file.meta.backend = m.value("backend", std::string());
    if (m.contains("bound_report")) {
      for (const auto& [key, value] : m["bound_report"].items())
        file.meta.bound_report[key] = value.get<double>();
    }
  }
  return file;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace speedscale
