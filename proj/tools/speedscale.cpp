#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "speedscale/errors.hpp"
#include "speedscale/experiment.hpp"
#include "speedscale/generate.hpp"
#include "speedscale/io.hpp"
#include "speedscale/multi.hpp"
#include "speedscale/oracle.hpp"

namespace {

using namespace speedscale;

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIoFormat = 3;
constexpr int kExitChecksum = 4;

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-")
    std::cout << content;
  else
    write_file(out_path, content);
}

int run_gen(const std::string& kind, int n, int m, std::uint64_t seed,
            const GenParams& params, const std::string& out_path) {
  const Instance inst = generate_instance(gen_kind_from_name(kind), n, m, seed, params);
  emit(out_path, instance_to_json(inst));
  return kExitOk;
}

int run_solve(const std::string& instance_path, const std::string& epsilon_text,
              std::uint64_t seed, int trials, std::optional<long> slot_cap,
              const std::string& backend_name_arg, double alpha_override,
              const std::string& out_path, const std::string& format,
              const std::string& dump_lp_path) {
  Instance inst = instance_from_json(read_file(instance_path));
  if (alpha_override > 0) {
    for (auto& p : inst.processors) p.alpha = alpha_override;
    inst.validate();
  }
  const Rat epsilon = parse_rat(epsilon_text);
  if (!(epsilon > 0)) throw ParameterError("epsilon must be > 0");
  const Backend backend = backend_from_name(backend_name_arg);

  if (!dump_lp_path.empty()) {
    std::vector<SlotGrid> grids;
    std::vector<std::vector<std::vector<Configuration>>> configs;
    for (const auto& proc : inst.processors) {
      grids.push_back(build_grid(inst, proc.id, epsilon, slot_cap));
      std::vector<std::vector<Configuration>> per_job(inst.jobs.size());
      for (std::size_t j = 0; j < inst.jobs.size(); ++j)
        if (inst.jobs[j].eligible(proc.id))
          per_job[j] = enumerate_configs(inst, proc.id, static_cast<int>(j), grids.back());
      configs.push_back(std::move(per_job));
    }
    std::ostringstream text;
    dump_lp(build_lp(inst, grids, configs), text);
    write_file(dump_lp_path, text.str());
  }

  SolveMeta meta;
  meta.seed = seed;
  meta.epsilon = epsilon;
  meta.slot_cap = slot_cap;
  meta.trials = trials;
  meta.backend = backend_name(backend);

  const InstanceStats st = stats(inst);
  const double alpha = st.alpha_max;
  const double eps = rat_to_double(epsilon);
  const double work_ratio = rat_to_double(st.w_max) / rat_to_double(st.w_min);

  Schedule schedule;
  double total_energy = 0.0;
  if (inst.mode == Mode::kSingle) {
    const SingleSolveResult res = solve_single(inst, epsilon, seed, trials, slot_cap);
    schedule = res.schedule;
    total_energy = res.energy;
    meta.lp_objective = res.lp_objective;
    meta.bound_report["single_theorem"] = bound_single_theorem(alpha, eps);
    meta.bound_report["single_linear"] = bound_single_linear(alpha, eps);
    meta.bound_report["single_abstract"] = bound_single_abstract(alpha, eps);
  } else {
    const MultiSolveResult res = solve_multi(inst, epsilon, seed, trials, backend, slot_cap);
    schedule = res.schedule;
    total_energy = res.energy;
    meta.lp_objective = res.lp_objective;
    meta.bound_report["multi_theorem"] = bound_multi(alpha, eps, work_ratio);
    // Corollary case: every job has the same work on a given processor.
    bool equal_work = true;
    for (const auto& proc : inst.processors) {
      const Rat* w = nullptr;
      for (const auto& job : inst.jobs) {
        if (!job.eligible(proc.id)) continue;
        if (w && job.timing(proc.id).work != *w) {
          equal_work = false;
          break;
        }
        w = &job.timing(proc.id).work;
      }
      if (!equal_work) break;
    }
    if (equal_work)
      meta.bound_report["multi_equal_work"] = bound_multi_equal_work(alpha, eps);
  }

  const double ratio = total_energy / meta.lp_objective;
  if (format == "csv") {
    std::cout << "energy,lp_objective,ratio";
    for (const auto& [name, value] : meta.bound_report) std::cout << "," << name;
    std::cout << "\n" << total_energy << "," << meta.lp_objective << "," << ratio;
    for (const auto& [name, value] : meta.bound_report) std::cout << "," << value;
    std::cout << "\n";
  } else {
    std::cout << "energy:        " << total_energy << "\n";
    std::cout << "lp_objective:  " << meta.lp_objective << "\n";
    std::cout << "ratio:         " << ratio << "\n";
    for (const auto& [name, value] : meta.bound_report)
      std::cout << "bound " << name << ": " << value << "\n";
  }

  if (!out_path.empty()) write_file(out_path, schedule_to_json(schedule, inst, meta));
  return kExitOk;
}

int run_verify(const std::string& instance_path, const std::string& schedule_path) {
  const Instance inst = instance_from_json(read_file(instance_path));
  const ScheduleFile file = schedule_from_json(read_file(schedule_path));
  if (file.instance_checksum != instance_checksum(inst)) {
    std::cerr << "checksum mismatch: schedule was produced for a different instance\n";
    return kExitChecksum;
  }
  const VerificationReport report = verify(file.schedule, inst, file.schedule.kind);
  for (const auto& v : report.violations) {
    std::cout << violation_kind_name(v.kind);
    if (v.job >= 0) std::cout << " job=" << v.job;
    if (v.processor >= 0) std::cout << " processor=" << v.processor;
    std::cout << ": " << v.detail << "\n";
  }
  if (!report.ok()) return kExitViolations;
  std::cout << "ok: " << file.schedule.segments.size() << " segments, no violations\n";
  return kExitOk;
}

int run_experiment(const std::string& preset, std::uint64_t seed,
                   const std::string& out_path) {
  std::string csv;
  if (preset == "bell")
    csv = experiment_bell_csv();
  else if (preset == "table1")
    csv = experiment_table1_csv(seed);
  else if (preset == "ratio-sweep")
    csv = experiment_ratio_sweep_csv(seed);
  else
    throw ParameterError("unknown preset '" + preset +
                         "' (use bell, table1 or ratio-sweep)");
  emit(out_path, csv);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speedscale: non-preemptive speed-scaling schedules minimizing energy"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  std::string gen_kind = "random";
  int gen_n = 4, gen_m = 1;
  std::uint64_t gen_seed = 1;
  GenParams gen_params;
  std::string gen_out;
  gen->add_option("--kind", gen_kind, "random | agreeable | equal-work | nested")
      ->envname("SPEEDSCALE_KIND");
  gen->add_option("--n", gen_n, "number of jobs")->envname("SPEEDSCALE_N");
  gen->add_option("--m", gen_m, "number of processors")->envname("SPEEDSCALE_M");
  gen->add_option("--seed", gen_seed, "generator seed")->envname("SPEEDSCALE_SEED");
  gen->add_option("--horizon", gen_params.horizon, "release window size");
  gen->add_option("--max-len", gen_params.max_len, "max life-interval length");
  gen->add_option("--max-work", gen_params.max_work, "max work");
  gen->add_option("--alpha", gen_params.alpha, "power exponent (single mode)")
      ->envname("SPEEDSCALE_ALPHA");
  gen->add_option("--out", gen_out, "output path ('-' for stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "solve an instance file");
  std::string solve_instance, solve_eps = "1", solve_backend = "pipeline";
  std::string solve_out, solve_format = "text", solve_dump_lp;
  std::uint64_t solve_seed = 0;
  int solve_trials = 32;
  long solve_cap_value = -1;
  double solve_alpha = -1.0;
  solve->add_option("instance", solve_instance, "instance JSON file")->required();
  solve->add_option("--epsilon", solve_eps, "discretization epsilon (> 0, rational)")
      ->envname("SPEEDSCALE_EPSILON");
  solve->add_option("--seed", solve_seed, "rounding seed")->envname("SPEEDSCALE_SEED");
  solve->add_option("--trials", solve_trials, "independent roundings to try")
      ->envname("SPEEDSCALE_TRIALS");
  solve->add_option("--slot-cap", solve_cap_value, "cap on slots per landmark gap")
      ->envname("SPEEDSCALE_SLOT_CAP");
  solve->add_option("--backend", solve_backend, "pipeline | yds-edf (multi mode)")
      ->envname("SPEEDSCALE_BACKEND");
  solve->add_option("--alpha", solve_alpha, "override every processor's alpha")
      ->envname("SPEEDSCALE_ALPHA");
  solve->add_option("--out", solve_out, "write the schedule JSON here");
  solve->add_option("--format", solve_format, "text | csv summary")
      ->envname("SPEEDSCALE_FORMAT");
  solve->add_option("--dump-lp", solve_dump_lp, "write the LP in text form here");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "check a schedule against an instance");
  std::string verify_instance, verify_schedule;
  verify_cmd->add_option("instance", verify_instance, "instance JSON file")->required();
  verify_cmd->add_option("schedule", verify_schedule, "schedule JSON file")->required();

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a preset battery, emit CSV");
  std::string exp_preset = "bell", exp_out;
  std::uint64_t exp_seed = 1;
  exp->add_option("--preset", exp_preset, "bell | table1 | ratio-sweep")
      ->envname("SPEEDSCALE_PRESET");
  exp->add_option("--seed", exp_seed, "battery seed")->envname("SPEEDSCALE_SEED");
  exp->add_option("--out", exp_out, "output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitIoFormat;
  }

  try {
    if (gen->parsed()) return run_gen(gen_kind, gen_n, gen_m, gen_seed, gen_params, gen_out);
    if (solve->parsed()) {
      std::optional<long> cap;
      if (solve_cap_value > 0) cap = solve_cap_value;
      return run_solve(solve_instance, solve_eps, solve_seed, solve_trials, cap,
                       solve_backend, solve_alpha, solve_out, solve_format,
                       solve_dump_lp);
    }
    if (verify_cmd->parsed()) return run_verify(verify_instance, verify_schedule);
    if (exp->parsed()) return run_experiment(exp_preset, exp_seed, exp_out);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoFormat;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoFormat;
  } catch (const Error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitIoFormat;
  }
  return kExitIoFormat;
}
