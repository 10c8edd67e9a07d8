#include "speedscale/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "speedscale/errors.hpp"

namespace speedscale {

namespace {

constexpr double kRcTol = 1e-9;       // reduced-cost optimality tolerance
constexpr double kPivotTol = 1e-9;    // ratio-test pivot threshold
constexpr double kStableTol = 1e-7;   // acceptable pivot magnitude / feasibility
constexpr long kMaxIterations = 500000;
constexpr int kRefactorEvery = 64;
constexpr int kStallLimit = 32;       // degenerate pivots before Bland kicks in

// Revised simplex specialized to the configuration LP in standard form:
//   cover row j:     sum_{v in job j} x_v - s_j            = 1
//   capacity row t:  sum_{v covering t} x_v          + u_t = 1
// Column ids: structural, then surplus s_j, then slack u_t, then (phase 1
// only) one artificial per cover row. Every right-hand side is 1.
class ConfigSimplex {
 public:
  explicit ConfigSimplex(const ConfigLp& lp)
      : lp_(lp),
        n_(lp.num_jobs),
        s_(lp.num_cap_rows),
        m_(lp.num_jobs + lp.num_cap_rows),
        v_(static_cast<long>(lp.vars.size())),
        surplus0_(v_),
        slack0_(v_ + n_),
        art0_(v_ + n_ + s_),
        num_cols_(v_ + n_ + s_ + n_),
        is_basic_(num_cols_, false),
        binv_(Eigen::MatrixXd::Identity(m_, m_)),
        xb_(Eigen::VectorXd::Ones(m_)) {
    basis_.resize(m_);
    for (int j = 0; j < n_; ++j) basis_[j] = art0_ + j;
    for (int t = 0; t < s_; ++t) basis_[n_ + t] = slack0_ + t;
    for (long c : basis_) is_basic_[c] = true;
  }

  LpSolution solve() {
    LpSolution sol;
    // Phase 1: minimize the artificial total.
    phase_ = 1;
    run();
    if (objective() > kStableTol) {
      sol.status = LpStatus::kInfeasible;
      sol.iterations = iterations_;
      return sol;
    }
    evict_artificials();
    // Phase 2: minimize the true cost.
    phase_ = 2;
    run();

    sol.status = LpStatus::kOptimal;
    sol.iterations = iterations_;
    sol.x.assign(v_, 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < v_) sol.x[basis_[i]] = std::max(0.0, xb_[i]);
    }
    for (long q = 0; q < v_; ++q) sol.objective += lp_.vars[q].cost * sol.x[q];
    return sol;
  }

 private:
  double cost_of(long col) const {
    if (phase_ == 1) return col >= art0_ ? 1.0 : 0.0;
    return col < v_ ? lp_.vars[col].cost : 0.0;
  }

  double objective() const {
    double obj = 0.0;
    for (int i = 0; i < m_; ++i) obj += cost_of(basis_[i]) * xb_[i];
    return obj;
  }

  // d = Binv * a_col for the sparse structured column.
  void ftran(long col, Eigen::VectorXd& d) const {
    if (col < v_) {
      const auto& var = lp_.vars[col];
      d = binv_.col(var.job_index);
      for (int t = var.cap_first; t <= var.cap_last; ++t) d += binv_.col(n_ + t);
    } else if (col < slack0_) {
      d = -binv_.col(col - surplus0_);
    } else if (col < art0_) {
      d = binv_.col(n_ + (col - slack0_));
    } else {
      d = binv_.col(col - art0_);
    }
  }

  // rho . a_col, where caps holds prefix sums of rho over capacity rows.
  double row_dot(const Eigen::VectorXd& rho, const std::vector<double>& caps,
                 long col) const {
    if (col < v_) {
      const auto& var = lp_.vars[col];
      return rho[var.job_index] + caps[var.cap_last + 1] - caps[var.cap_first];
    }
    if (col < slack0_) return -rho[col - surplus0_];
    if (col < art0_) return rho[n_ + (col - slack0_)];
    return rho[col - art0_];
  }

  void cap_prefix(const Eigen::VectorXd& rho, std::vector<double>& caps) const {
    caps.resize(s_ + 1);
    caps[0] = 0.0;
    for (int t = 0; t < s_; ++t) caps[t + 1] = caps[t] + rho[n_ + t];
  }

  // Entering column by reduced cost; -1 when optimal. Artificials never
  // re-enter. `bland` picks the first eligible id, otherwise the most
  // negative reduced cost wins (ties to the smaller id).
  long price(bool bland) const {
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = cost_of(basis_[i]);
    Eigen::VectorXd y = binv_.transpose() * cb;
    std::vector<double> caps;
    cap_prefix(y, caps);

    long best = -1;
    double best_rc = -kRcTol;
    for (long col = 0; col < art0_; ++col) {
      if (is_basic_[col]) continue;
      const double rc = cost_of(col) - row_dot(y, caps, col);
      if (rc < best_rc) {
        best = col;
        best_rc = rc;
        if (bland) break;
      }
    }
    return best;
  }

  // Leaving row via the ratio test; ties resolved to the smallest basis
  // column id (Bland-compatible). Returns -1 when no pivot is positive.
  int ratio_test(const Eigen::VectorXd& d) const {
    int leave = -1;
    double theta = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m_; ++i) {
      if (d[i] <= kPivotTol) continue;
      const double ratio = std::max(0.0, xb_[i]) / d[i];
      if (ratio < theta - 1e-12 ||
          (ratio < theta + 1e-12 && (leave < 0 || basis_[i] < basis_[leave]))) {
        theta = ratio;
        leave = i;
      }
    }
    return leave;
  }

  void pivot(long enter, int leave, const Eigen::VectorXd& d) {
    const double piv = d[leave];
    const double theta = std::max(0.0, xb_[leave]) / piv;
    xb_ -= theta * d;
    xb_[leave] = theta;
    binv_.row(leave) /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == leave) continue;
      const double f = d[i];
      if (f != 0.0) binv_.row(i) -= f * binv_.row(leave);
    }
    is_basic_[basis_[leave]] = false;
    is_basic_[enter] = true;
    basis_[leave] = enter;
  }

  void refactor() {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      const long col = basis_[i];
      if (col < v_) {
        const auto& var = lp_.vars[col];
        b(var.job_index, i) = 1.0;
        for (int t = var.cap_first; t <= var.cap_last; ++t) b(n_ + t, i) = 1.0;
      } else if (col < slack0_) {
        b(col - surplus0_, i) = -1.0;
      } else if (col < art0_) {
        b(n_ + (col - slack0_), i) = 1.0;
      } else {
        b(col - art0_, i) = 1.0;
      }
    }
    binv_ = b.partialPivLu().inverse();
    xb_ = binv_.rowwise().sum();  // rhs is all ones
  }

  void run() {
    bool bland = false;
    int stall = 0;
    double last_obj = objective();
    int since_refactor = 0;
    Eigen::VectorXd d(m_);

    while (true) {
      if (++iterations_ > kMaxIterations)
        throw InternalError("simplex iteration limit exceeded");
      const long enter = price(bland);
      if (enter < 0) break;  // optimal for this phase

      ftran(enter, d);
      const int leave = ratio_test(d);
      if (leave < 0) {
        // Costs are nonnegative and the feasible region is bounded, so an
        // unbounded improving ray cannot exist.
        throw InternalError("simplex: unbounded direction in a bounded LP");
      }
      if (std::abs(d[leave]) < kStableTol) {
        refactor();
        since_refactor = 0;
        ftran(enter, d);
        const int retry = ratio_test(d);
        if (retry < 0 || std::abs(d[retry]) < kStableTol)
          throw InternalError("simplex: numerically unstable pivot");
        pivot(enter, retry, d);
      } else {
        pivot(enter, leave, d);
      }

      if (++since_refactor >= kRefactorEvery) {
        refactor();
        since_refactor = 0;
      }

      // Dantzig pricing normally; after a degenerate stall switch to Bland's
      // rule, which guarantees escape, then switch back on real progress.
      const double obj = objective();
      if (obj < last_obj - 1e-12 * (1.0 + std::abs(last_obj))) {
        last_obj = obj;
        stall = 0;
        bland = false;
      } else if (++stall >= kStallLimit) {
        bland = true;
      }
    }
  }

  // Replace every basic artificial (value 0 after a feasible phase 1) by some
  // non-artificial column with a nonzero pivot in its row. The unit slack and
  // surplus columns alone span all rows, so a candidate always exists.
  void evict_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < art0_) continue;
      Eigen::VectorXd rho = binv_.row(i);
      std::vector<double> caps;
      cap_prefix(rho, caps);
      long found = -1;
      for (long col = 0; col < art0_; ++col) {
        if (is_basic_[col]) continue;
        if (std::abs(row_dot(rho, caps, col)) > kStableTol) {
          found = col;
          break;
        }
      }
      if (found < 0) throw InternalError("simplex: cannot drive artificial out of basis");
      Eigen::VectorXd d(m_);
      ftran(found, d);
      pivot(found, i, d);
      xb_[i] = 0.0;  // the swap is degenerate
    }
  }

  const ConfigLp& lp_;
  const int n_;
  const int s_;
  const int m_;
  const long v_;
  const long surplus0_;
  const long slack0_;
  const long art0_;
  const long num_cols_;

  int phase_ = 1;
  long iterations_ = 0;
  std::vector<long> basis_;
  std::vector<char> is_basic_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
};

}  // namespace

ConfigLp build_lp(const Instance& instance, const std::vector<SlotGrid>& grids,
                  const std::vector<std::vector<std::vector<Configuration>>>& configs) {
  const int m = static_cast<int>(instance.processors.size());
  const int n = static_cast<int>(instance.jobs.size());
  if (static_cast<int>(grids.size()) != m || static_cast<int>(configs.size()) != m)
    throw ParameterError("build_lp: one grid and config table per processor required");

  ConfigLp lp;
  lp.num_jobs = n;
  lp.cap_row_offset.resize(m);
  lp.cap_rows_per_proc.resize(m);
  for (int pi = 0; pi < m; ++pi) {
    lp.cap_row_offset[pi] = lp.num_cap_rows;
    lp.cap_rows_per_proc[pi] = grids[pi].slot_count();
    lp.num_cap_rows += grids[pi].slot_count();
  }

  lp.job_vars.resize(n);
  for (int j = 0; j < n; ++j) {
    const auto begin = static_cast<int>(lp.vars.size());
    for (int pi = 0; pi < m; ++pi) {
      const auto& job = instance.jobs[j];
      const int pid = instance.processors[pi].id;
      if (!job.eligible(pid)) continue;
      const double alpha = instance.processors[pi].alpha;
      const Rat& work = job.timing(pid).work;
      const auto& list = configs[pi][j];
      for (std::size_t ci = 0; ci < list.size(); ++ci) {
        LpVariable var;
        var.job_index = j;
        var.proc_index = pi;
        var.config_index = static_cast<int>(ci);
        var.cap_first = lp.cap_row_offset[pi] + list[ci].first_slot;
        var.cap_last = lp.cap_row_offset[pi] + list[ci].last_slot;
        var.cost = config_energy(work, list[ci].length, alpha);
        lp.vars.push_back(var);
      }
    }
    lp.job_vars[j] = {begin, static_cast<int>(lp.vars.size())};
    if (lp.job_vars[j].first == lp.job_vars[j].second) {
      throw InfeasibleError("job " + std::to_string(instance.jobs[j].id) +
                            " has no feasible configuration at this granularity");
    }
  }
  return lp;
}

LpSolution solve_lp(const ConfigLp& lp) {
  ConfigSimplex simplex(lp);
  LpSolution sol = simplex.solve();
  if (sol.status != LpStatus::kOptimal) return sol;

  // Primal feasibility of the reported solution (tolerance 1e-7).
  std::vector<double> cap_used(lp.num_cap_rows, 0.0);
  for (int j = 0; j < lp.num_jobs; ++j) {
    double cover = 0.0;
    for (int v = lp.job_vars[j].first; v < lp.job_vars[j].second; ++v) {
      cover += sol.x[v];
      for (int t = lp.vars[v].cap_first; t <= lp.vars[v].cap_last; ++t)
        cap_used[t] += sol.x[v];
    }
    if (cover < 1.0 - kStableTol)
      throw InternalError("LP solution violates a cover constraint");
  }
  for (double used : cap_used)
    if (used > 1.0 + kStableTol)
      throw InternalError("LP solution violates a capacity constraint");
  return sol;
}

void dump_lp(const ConfigLp& lp, std::ostream& out) {
  out << "\\ configuration LP: " << lp.vars.size() << " variables, "
      << lp.num_jobs << " cover rows, " << lp.num_cap_rows << " capacity rows\n";
  out << "Minimize\n obj:";
  for (std::size_t v = 0; v < lp.vars.size(); ++v) {
    out << (v == 0 ? " " : " + ") << lp.vars[v].cost << " x" << v;
  }
  out << "\nSubject To\n";
  for (int j = 0; j < lp.num_jobs; ++j) {
    out << " cover_" << j << ":";
    bool first = true;
    for (int v = lp.job_vars[j].first; v < lp.job_vars[j].second; ++v) {
      out << (first ? " " : " + ") << "x" << v;
      first = false;
    }
    out << " >= 1\n";
  }
  for (int t = 0; t < lp.num_cap_rows; ++t) {
    bool any = false;
    for (std::size_t v = 0; v < lp.vars.size(); ++v) {
      if (lp.vars[v].cap_first <= t && t <= lp.vars[v].cap_last) {
        if (!any) out << " cap_" << t << ":";
        out << (any ? " + " : " ") << "x" << v;
        any = true;
      }
    }
    if (any) out << " <= 1\n";
  }
  out << "Bounds\n";
  for (std::size_t v = 0; v < lp.vars.size(); ++v) out << " 0 <= x" << v << "\n";
  out << "End\n";
}

}  // namespace speedscale
