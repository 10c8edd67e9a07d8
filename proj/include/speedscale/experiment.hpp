#pragma once

#include <cstdint>
#include <string>

namespace speedscale {

// Approximation-bound formulas, evaluated numerically.
double bound_single_theorem(double alpha, double epsilon);   // (1+e)^(a-1) * B~_a
double bound_single_linear(double alpha, double epsilon);    // (1+e) * B~_a
double bound_single_abstract(double alpha, double epsilon);  // (1+e)^a * B~_a
double bound_multi(double alpha, double epsilon, double work_ratio);
double bound_multi_equal_work(double alpha, double epsilon);

// CSV emitters behind the experiment presets; deterministic for a fixed seed.
std::string experiment_bell_csv();
std::string experiment_table1_csv(std::uint64_t seed);
std::string experiment_ratio_sweep_csv(std::uint64_t seed);

}  // namespace speedscale
