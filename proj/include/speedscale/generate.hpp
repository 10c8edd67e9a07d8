#pragma once

#include <cstdint>
#include <string>

#include "speedscale/model.hpp"

namespace speedscale {

enum class GenKind {
  kRandom,     // independent windows and works, fully heterogeneous in multi mode
  kAgreeable,  // release order agrees with deadline order
  kEqualWork,  // every job has the same work on a given processor
  kNested,     // containment-heavy windows stressing the configuration restriction
};

GenKind gen_kind_from_name(const std::string& name);
const char* gen_kind_name(GenKind kind);

struct GenParams {
  long horizon = 10;   // releases drawn from [0, horizon)
  long max_len = 5;    // window lengths drawn from [1, max_len]
  long max_work = 6;   // works drawn from [1, max_work]
  double alpha = 2.0;  // used when m == 1; multi processors draw from a small set
};

// Deterministic for a fixed (kind, n, m, seed, params). Processor ids are
// 0..m-1; job ids are 1..n.
Instance generate_instance(GenKind kind, int n, int m, std::uint64_t seed,
                           const GenParams& params);

}  // namespace speedscale
