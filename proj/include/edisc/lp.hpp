#pragma once

#include <vector>

namespace edisc::lp {

enum class Status { Optimal, Infeasible, Unbounded, NumericalFailure };

struct Result {
  Status status = Status::NumericalFailure;
  std::vector<double> x;
  double objective = 0.0;
};

inline constexpr double kFeasibilityTol = 1e-7;

// minimize c.x subject to A x <= b, x >= 0. Dense two-phase simplex;
// Dantzig pricing with a Bland fallback against cycling.
Result solve(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
             const std::vector<double>& c);

// Feasibility only: is {x >= 0 : A x <= b} non-empty?
bool feasible(const std::vector<std::vector<double>>& A, const std::vector<double>& b);

// Telemetry for complexity assertions.
long solve_count();
void reset_solve_count();

}  // namespace edisc::lp
