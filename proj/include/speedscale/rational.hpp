#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "speedscale/errors.hpp"

namespace speedscale {

// Exact rational arithmetic for times, works and speeds. Energies and LP
// arithmetic are double; everything produced by combinatorial steps
// (landmarks, slot boundaries, slot speeds) stays exact so that boundaries
// match bit-for-bit across modules.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

// Exact conversion of a finite double (every double is a dyadic rational).
Rat rat_from_double(double value);

// Canonical "p/q" form with q > 0 and gcd(p, q) = 1, e.g. "3/2", "-1/4", "5/1".
std::string rat_str(const Rat& r);

// Accepts "p", "p/q" and plain decimals like "1.5" or "-0.25".
Rat parse_rat(const std::string& text);

// SplitMix64; used to derive independent per-trial / per-processor seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace speedscale
