#include "speedscale/generate.hpp"

#include <algorithm>
#include <random>

#include "speedscale/errors.hpp"

namespace speedscale {

GenKind gen_kind_from_name(const std::string& name) {
  if (name == "random") return GenKind::kRandom;
  if (name == "agreeable") return GenKind::kAgreeable;
  if (name == "equal-work") return GenKind::kEqualWork;
  if (name == "nested") return GenKind::kNested;
  throw ParameterError("unknown instance kind '" + name +
                       "' (use random, agreeable, equal-work or nested)");
}

const char* gen_kind_name(GenKind kind) {
  switch (kind) {
    case GenKind::kRandom: return "random";
    case GenKind::kAgreeable: return "agreeable";
    case GenKind::kEqualWork: return "equal-work";
    case GenKind::kNested: return "nested";
  }
  return "unknown";
}

namespace {

long draw(std::mt19937_64& rng, long lo, long hi) {  // inclusive bounds
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

const double kAlphaChoices[] = {1.5, 2.0, 2.5, 3.0};

}  // namespace

Instance generate_instance(GenKind kind, int n, int m, std::uint64_t seed,
                           const GenParams& params) {
  if (n < 1 || m < 1) throw ParameterError("need n >= 1 jobs and m >= 1 processors");
  if (params.horizon < 1 || params.max_len < 1 || params.max_work < 1)
    throw ParameterError("generator parameters must be positive");

  std::mt19937_64 rng(seed);
  Instance inst;
  inst.mode = m == 1 ? Mode::kSingle : Mode::kMulti;
  for (int p = 0; p < m; ++p) {
    const double alpha = m == 1 ? params.alpha : kAlphaChoices[rng() % 4];
    inst.processors.push_back({p, alpha});
  }

  // Per-processor work used by the equal-work kind.
  std::vector<long> proc_work(m);
  for (int p = 0; p < m; ++p) proc_work[p] = draw(rng, 1, params.max_work);

  // Base windows.
  std::vector<std::pair<long, long>> window(n);
  switch (kind) {
    case GenKind::kRandom:
    case GenKind::kEqualWork: {
      for (int j = 0; j < n; ++j) {
        const long r = draw(rng, 0, params.horizon - 1);
        window[j] = {r, r + draw(rng, 1, params.max_len)};
      }
      break;
    }
    case GenKind::kAgreeable: {
      std::vector<long> releases(n);
      for (auto& r : releases) r = draw(rng, 0, params.horizon - 1);
      std::sort(releases.begin(), releases.end());
      long last_deadline = 0;
      for (int j = 0; j < n; ++j) {
        long d = releases[j] + draw(rng, 1, params.max_len);
        d = std::max(d, std::max(last_deadline, releases[j] + 1));
        window[j] = {releases[j], d};
        last_deadline = d;
      }
      break;
    }
    case GenKind::kNested: {
      // Wide root, every later window nested in an earlier one when possible.
      window[0] = {0, params.horizon + params.max_len};
      for (int j = 1; j < n; ++j) {
        const auto& host = window[draw(rng, 0, j - 1)];
        if (host.second - host.first >= 3) {
          const long r = draw(rng, host.first + 1, host.second - 2);
          window[j] = {r, draw(rng, r + 1, host.second - 1)};
        } else {
          const long r = draw(rng, 0, params.horizon - 1);
          window[j] = {r, r + draw(rng, 1, params.max_len)};
        }
      }
      break;
    }
  }

  for (int j = 0; j < n; ++j) {
    Job job;
    job.id = j + 1;
    const long base_work = draw(rng, 1, params.max_work);
    if (m == 1) {
      const long work = kind == GenKind::kEqualWork ? proc_work[0] : base_work;
      job.on[0] = {Rat(work), Rat(window[j].first), Rat(window[j].second)};
    } else {
      // Eligibility mask with at least one processor.
      std::vector<int> eligible;
      for (int p = 0; p < m; ++p)
        if (rng() % 10 < 7) eligible.push_back(p);
      if (eligible.empty()) eligible.push_back(static_cast<int>(rng() % m));

      for (int p : eligible) {
        long r = window[j].first;
        long d = window[j].second;
        long w = kind == GenKind::kEqualWork ? proc_work[p] : base_work;
        if (kind == GenKind::kRandom || kind == GenKind::kEqualWork) {
          // Heterogeneous life intervals and works per processor.
          r = std::max<long>(0, r + draw(rng, -1, 1));
          d = std::max(r + 1, d + draw(rng, -1, 1));
          if (kind == GenKind::kRandom) w = std::max<long>(1, w + draw(rng, -1, 1));
        }
        job.on[p] = {Rat(w), Rat(r), Rat(d)};
      }
    }
    inst.jobs.push_back(std::move(job));
  }

  inst.validate();
  return inst;
}

}  // namespace speedscale
