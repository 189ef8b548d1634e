#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "edisc/core_model.hpp"
#include "edisc/linalg.hpp"

namespace edisc {

struct NotRealizableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalDegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SeparationCertificate {
  la::Vec v;
  double margin = 0.0;  // v.x_j >= v.x_i + margin for every tested hull point
};

// Strict separability with margin-1 normalization (LP feasibility).
bool linearly_separable(const std::vector<la::Vec>& x_plus, const std::vector<la::Vec>& x_minus);

// Hard-margin separator: w.x + b >= +1 on x_plus, <= -1 on x_minus, with
// ||w||_2 within 1% of the max-margin optimum. Throws NotRealizableError on
// non-separable input.
LinearModel max_margin_classifier(const std::vector<la::Vec>& x_plus,
                                  const std::vector<la::Vec>& x_minus);

// (d+1)x(d+1) orthogonal matrix whose first column is (b,w)/||(b,w)||.
la::Mat orthogonal_completion(const la::Vec& w, double b);

// Rows [1|x].U for x in x_minus then x_plus, each divided by its first entry
// with the first column dropped. Throws NumericalDegeneracyError when a
// denominator falls below 1e-9.
la::Mat apply_projective_map(const std::vector<la::Vec>& x_minus,
                             const std::vector<la::Vec>& x_plus, const la::Mat& u);

// Clarkson's output-sensitive extremal-points algorithm. Exact duplicates are
// collapsed before the hull loop and re-expanded in the returned index set.
std::vector<int> extremal_points(const la::Mat& points);

// Feasible certificate separating x_j from the tested hull points, or
// nullopt when x_j lies in their convex hull.
std::optional<SeparationCertificate> separation_lp(const la::Vec& x_j,
                                                   const std::vector<la::Vec>& hull_points);

// Brute-force hull membership (convex-combination feasibility LP); test oracle.
bool in_convex_hull(const la::Vec& x, const std::vector<la::Vec>& points);

// Negative documents whose label-flip to positive preserves separability.
// Fast path: projective map + Clarkson. Naive path: one separability LP per
// negative document; the reference oracle.
std::vector<DocId> critical_points_fast(const Instance& inst);
std::vector<DocId> critical_points_naive(const Instance& inst);

}  // namespace edisc
