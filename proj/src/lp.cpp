#include "edisc/lp.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace edisc::lp {

namespace {

constexpr double kPivotTol = 1e-9;

long g_solve_count = 0;

// Dense simplex tableau. Columns: structural vars, slacks, artificials, rhs.
struct Tableau {
  int rows = 0, cols = 0;  // cols excludes rhs
  std::vector<double> data;  // (rows+1) x (cols+1), last row = objective
  std::vector<int> basis;

  double& at(int r, int c) { return data[static_cast<size_t>(r) * (cols + 1) + c]; }
  double val(int r, int c) const { return data[static_cast<size_t>(r) * (cols + 1) + c]; }
  double& rhs(int r) { return at(r, cols); }

  void pivot(int pr, int pc) {
    double piv = at(pr, pc);
    double inv = 1.0 / piv;
    for (int c = 0; c <= cols; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (int r = 0; r <= rows; ++r) {
      if (r == pr) continue;
      double factor = at(r, pc);
      if (factor == 0.0) continue;
      for (int c = 0; c <= cols; ++c) at(r, c) -= factor * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis[pr] = pc;
  }

  // Returns Optimal / Unbounded / NumericalFailure for the current objective row.
  Status optimize(int allowed_cols, double enter_tol = kPivotTol, bool force_bland = false) {
    const long max_iters = 200L * (rows + cols) + 1000;
    long degenerate_streak = 0;
    double last_obj = rhs(rows);
    for (long iter = 0; iter < max_iters; ++iter) {
      bool bland = force_bland || degenerate_streak > 40;
      int pc = -1;
      double best = -enter_tol;
      for (int c = 0; c < allowed_cols; ++c) {
        double rc = at(rows, c);
        if (rc < -enter_tol) {
          if (bland) { pc = c; break; }
          if (rc < best) { best = rc; pc = c; }
        }
      }
      if (pc < 0) return Status::Optimal;

      int pr = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows; ++r) {
        double a = at(r, pc);
        if (a > kPivotTol) {
          double ratio = rhs(r) / a;
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && (pr < 0 || basis[r] < basis[pr]))) {
            best_ratio = ratio;
            pr = r;
          }
        }
      }
      if (pr < 0) return Status::Unbounded;
      pivot(pr, pc);

      double obj = rhs(rows);
      if (std::abs(obj - last_obj) < 1e-12)
        ++degenerate_streak;
      else
        degenerate_streak = 0;
      last_obj = obj;
    }
    return Status::NumericalFailure;
  }

  // Rebuild the tableau from a pristine copy and pivot back into the current
  // basis, discarding the roundoff accumulated over many pivots.
  bool refactor(const Tableau& pristine) {
    std::vector<int> wanted = basis;  // column set; row pairing may change
    data = pristine.data;
    basis = pristine.basis;
    std::vector<bool> row_done(rows, false), col_done(rows, false);
    for (int r = 0; r < rows; ++r) {  // columns already basic in pristine stay
      for (int k = 0; k < rows; ++k) {
        if (!col_done[k] && !row_done[r] && basis[r] == wanted[k]) {
          row_done[r] = col_done[k] = true;
          break;
        }
      }
    }
    int remaining = 0;
    for (int r = 0; r < rows; ++r) remaining += !row_done[r];
    while (remaining > 0) {
      int br = -1, bk = -1;
      double best = 0.0;
      for (int r = 0; r < rows; ++r) {
        if (row_done[r]) continue;
        for (int k = 0; k < rows; ++k) {
          if (col_done[k]) continue;
          double a = std::abs(at(r, wanted[k]));
          if (a > best) { best = a; br = r; bk = k; }
        }
      }
      if (br < 0 || best < 1e-11) return false;  // basis numerically singular
      pivot(br, wanted[bk]);
      row_done[br] = col_done[bk] = true;
      --remaining;
    }
    return true;
  }

};

}  // namespace

Result solve(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
             const std::vector<double>& c) {
  ++g_solve_count;
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(c.size());
  for (const auto& row : A)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("ragged constraint matrix");
  if (static_cast<int>(b.size()) != m) throw std::invalid_argument("rhs size mismatch");

  // count artificials: rows with b < 0 need one after sign flip
  int n_art = 0;
  for (double bi : b)
    if (bi < 0.0) ++n_art;

  Tableau t;
  t.rows = m;
  t.cols = n + m + n_art;
  t.data.assign(static_cast<size_t>(m + 1) * (t.cols + 1), 0.0);
  t.basis.assign(m, -1);

  int art = 0;
  for (int r = 0; r < m; ++r) {
    double sign = b[r] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) t.at(r, j) = sign * A[r][j];
    t.at(r, n + r) = sign;  // slack
    t.rhs(r) = sign * b[r];
    if (b[r] < 0.0) {
      int ac = n + m + art++;
      t.at(r, ac) = 1.0;
      t.basis[r] = ac;
    } else {
      t.basis[r] = n + r;
    }
  }

  if (n_art > 0) {
    // phase 1: minimize the artificial sum, expressed through the basis rows
    for (int r = 0; r < m; ++r) {
      if (t.basis[r] >= n + m) {
        for (int ci = 0; ci <= t.cols; ++ci) t.at(m, ci) -= t.at(r, ci);
      }
    }
    for (int ci = n + m; ci < t.cols; ++ci) t.at(m, ci) = 0.0;
    const Tableau pristine = t;  // drift-free reference for refactorization
    Status s1 = t.optimize(t.cols);
    if (s1 != Status::Optimal) return {Status::NumericalFailure, {}, 0.0};
    // Dantzig pricing can stall above the feasibility tolerance on degenerate
    // systems, and long pivot sequences accumulate roundoff. Before declaring
    // the program infeasible, refactor the tableau from pristine data under
    // the current basis and polish with Bland's rule.
    for (int round = 0; round < 4 && -t.rhs(m) > kFeasibilityTol; ++round) {
      double before = -t.rhs(m);
      bool refactored = t.refactor(pristine);
      if (!refactored) t = pristine;  // final basis too ill-conditioned: restart
      s1 = t.optimize(t.cols, 1e-12, true);
      if (s1 != Status::Optimal) return {Status::NumericalFailure, {}, 0.0};
      if (refactored && -t.rhs(m) >= before - 1e-15)
        break;  // converged, genuinely infeasible
    }
    if (-t.rhs(m) > kFeasibilityTol) return {Status::Infeasible, {}, 0.0};
    // drive lingering artificials out of the basis where possible
    for (int r = 0; r < m; ++r) {
      if (t.basis[r] >= n + m) {
        int pc = -1;
        for (int ci = 0; ci < n + m; ++ci)
          if (std::abs(t.val(r, ci)) > kPivotTol) { pc = ci; break; }
        if (pc >= 0) t.pivot(r, pc);
      }
    }
  }

  // phase 2 objective
  for (int ci = 0; ci <= t.cols; ++ci) t.at(m, ci) = 0.0;
  for (int j = 0; j < n; ++j) t.at(m, j) = c[j];
  for (int r = 0; r < m; ++r) {
    int bv = t.basis[r];
    if (bv < n && c[bv] != 0.0)
      for (int ci = 0; ci <= t.cols; ++ci) t.at(m, ci) -= c[bv] * t.at(r, ci);
  }
  // artificials stay out: bar them from pricing by restricting columns
  Status s2 = t.optimize(n + m);
  if (s2 == Status::Unbounded) return {Status::Unbounded, {}, 0.0};
  if (s2 != Status::Optimal) return {Status::NumericalFailure, {}, 0.0};

  Result res;
  res.status = Status::Optimal;
  res.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r)
    if (t.basis[r] < n) res.x[t.basis[r]] = t.rhs(r);
  res.objective = -t.rhs(m);
  double obj = 0.0;
  for (int j = 0; j < n; ++j) obj += c[j] * res.x[j];
  res.objective = obj;
  return res;
}

bool feasible(const std::vector<std::vector<double>>& A, const std::vector<double>& b) {
  std::vector<double> c(A.empty() ? 0 : A[0].size(), 0.0);
  Status s = solve(A, b, c).status;
  if (s == Status::NumericalFailure)
    throw std::runtime_error("feasibility LP did not converge");
  return s == Status::Optimal;
}

long solve_count() { return g_solve_count; }
void reset_solve_count() { g_solve_count = 0; }

}  // namespace edisc::lp
