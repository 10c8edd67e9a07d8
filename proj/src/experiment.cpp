#include "speedscale/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "speedscale/generate.hpp"
#include "speedscale/multi.hpp"
#include "speedscale/oracle.hpp"
#include "speedscale/rational.hpp"

namespace speedscale {

namespace {

constexpr double kBellTol = 1e-10;

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(9);
  out << v;
  return out.str();
}

// Works drawn from {1, work_ratio} with both present, so the battery's
// w_max/w_min is exactly the requested ratio.
Instance pinned_ratio_instance(int n, int m, std::uint64_t seed, long work_ratio) {
  GenParams params;
  params.horizon = 8;
  params.max_len = 4;
  Instance inst = generate_instance(GenKind::kRandom, n, m, seed, params);
  std::mt19937_64 rng(mix_seed(seed, 7));
  int idx = 0;
  for (auto& job : inst.jobs) {
    for (auto& [pid, t] : job.on) {
      long w = 1;
      if (idx == 1 || (idx > 1 && rng() % 2 == 0)) w = work_ratio;
      t.work = Rat(w);
    }
    ++idx;
  }
  return inst;
}

}  // namespace

double bound_single_theorem(double alpha, double epsilon) {
  return std::pow(1.0 + epsilon, alpha - 1.0) * bell_tilde(alpha, kBellTol).value;
}

double bound_single_linear(double alpha, double epsilon) {
  return (1.0 + epsilon) * bell_tilde(alpha, kBellTol).value;
}

double bound_single_abstract(double alpha, double epsilon) {
  return std::pow(1.0 + epsilon, alpha) * bell_tilde(alpha, kBellTol).value;
}

double bound_multi(double alpha, double epsilon, double work_ratio) {
  return bell_tilde(alpha, kBellTol).value *
         std::pow((1.0 + epsilon) * (1.0 + work_ratio), alpha);
}

double bound_multi_equal_work(double alpha, double epsilon) {
  return bell_tilde(alpha, kBellTol).value * std::pow(2.0 * (1.0 + epsilon), alpha);
}

std::string experiment_bell_csv() {
  std::ostringstream out;
  out << "alpha,value,terms_used,truncation_bound\n";
  for (double alpha = 1.0; alpha <= 4.0 + 1e-9; alpha += 0.25) {
    const BellTilde b = bell_tilde(alpha, 1e-8);
    out << fmt(alpha) << "," << fmt(b.value) << "," << b.terms_used << ","
        << fmt(b.truncation_bound) << "\n";
  }
  return out.str();
}

std::string experiment_table1_csv(std::uint64_t seed) {
  std::ostringstream out;
  out << "alpha,epsilon,work_ratio,bell,single_theorem,single_linear,single_abstract,"
         "multi_theorem,multi_equal_work,emp_single_max_ratio,emp_multi_max_ratio\n";

  const double alphas[] = {1.5, 2.0, 2.5, 3.0};
  const double epsilons[] = {1.0};
  const long ratios[] = {1, 2};
  const Rat eps_rat(1);

  for (double alpha : alphas) {
    for (double epsilon : epsilons) {
      for (long ratio : ratios) {
        double single_max = 1.0;
        double multi_max = 1.0;
        for (int cell = 0; cell < 3; ++cell) {
          const std::uint64_t s =
              mix_seed(seed, static_cast<std::uint64_t>(alpha * 8) * 1000 +
                                 static_cast<std::uint64_t>(ratio) * 10 + cell);
          Instance single = pinned_ratio_instance(4, 1, s, ratio);
          for (auto& p : single.processors) p.alpha = alpha;
          const auto sres = solve_single(single, eps_rat, s, 8, 12);
          single_max = std::max(single_max, sres.energy / sres.lp_objective);

          Instance multi = pinned_ratio_instance(4, 2, mix_seed(s, 2), ratio);
          for (auto& p : multi.processors) p.alpha = alpha;
          const auto mres =
              solve_multi(multi, eps_rat, s, 8, Backend::kPipeline, 12);
          multi_max = std::max(multi_max, mres.energy / mres.lp_objective);
        }
        out << fmt(alpha) << "," << fmt(epsilon) << "," << ratio << ","
            << fmt(bell_tilde(alpha, kBellTol).value) << ","
            << fmt(bound_single_theorem(alpha, epsilon)) << ","
            << fmt(bound_single_linear(alpha, epsilon)) << ","
            << fmt(bound_single_abstract(alpha, epsilon)) << ","
            << fmt(bound_multi(alpha, epsilon, static_cast<double>(ratio))) << ","
            << fmt(bound_multi_equal_work(alpha, epsilon)) << ","
            << fmt(single_max) << "," << fmt(multi_max) << "\n";
      }
    }
  }
  return out.str();
}

std::string experiment_ratio_sweep_csv(std::uint64_t seed) {
  std::ostringstream out;
  out << "alpha,epsilon,instances,mean_ratio_lp,max_ratio_lp,single_abstract_bound\n";
  const double alphas[] = {1.5, 2.0, 2.5, 3.0};
  const struct {
    const char* text;
    double value;
  } epsilons[] = {{"1/2", 0.5}, {"1", 1.0}, {"2", 2.0}};

  for (double alpha : alphas) {
    for (const auto& eps : epsilons) {
      const Rat eps_rat = parse_rat(eps.text);
      double sum = 0.0;
      double worst = 1.0;
      const int cells = 5;
      for (int cell = 0; cell < cells; ++cell) {
        const std::uint64_t s =
            mix_seed(seed, static_cast<std::uint64_t>(alpha * 4) * 100 +
                               static_cast<std::uint64_t>(eps.value * 4) * 10 + cell);
        GenParams params;
        params.horizon = 8;
        params.max_len = 4;
        params.alpha = alpha;
        const Instance inst = generate_instance(GenKind::kRandom, 4, 1, s, params);
        const auto res = solve_single(inst, eps_rat, s, 8, 12);
        const double ratio = res.energy / res.lp_objective;
        sum += ratio;
        worst = std::max(worst, ratio);
      }
      out << fmt(alpha) << "," << eps.text << "," << cells << "," << fmt(sum / cells)
          << "," << fmt(worst) << "," << fmt(bound_single_abstract(alpha, eps.value))
          << "\n";
    }
  }
  return out.str();
}

}  // namespace speedscale
