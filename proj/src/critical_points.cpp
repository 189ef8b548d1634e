#include "edisc/critical_points.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "edisc/lp.hpp"

namespace edisc {

namespace {

constexpr double kBoxBound = 1e6;

// margin-1 separability constraints over split variables
// [w+ (d), w- (d), b+, b-, extras...]; returns rows into A/b.
void add_margin_rows(const std::vector<la::Vec>& x_plus, const std::vector<la::Vec>& x_minus,
                     int d, int n_vars, std::vector<std::vector<double>>& A,
                     std::vector<double>& b) {
  auto row_for = [&](const la::Vec& x, double sign) {
    // sign=+1 encodes w.x + b <= -1; sign=-1 encodes -(w.x + b) <= -1
    std::vector<double> row(n_vars, 0.0);
    for (int j = 0; j < d; ++j) {
      row[j] = sign * x[j];
      row[d + j] = -sign * x[j];
    }
    row[2 * d] = sign;
    row[2 * d + 1] = -sign;
    A.push_back(std::move(row));
    b.push_back(-1.0);
  };
  for (const auto& x : x_plus) row_for(x, -1.0);
  for (const auto& x : x_minus) row_for(x, +1.0);
}

double hinge_objective(const std::vector<la::Vec>& pts, const std::vector<double>& ys,
                       const la::Vec& z, int d, double c_pen) {
  double f = 0.0;
  for (int j = 0; j < d; ++j) f += 0.5 * z[j] * z[j];
  for (size_t i = 0; i < pts.size(); ++i) {
    double s = z[d];
    for (int j = 0; j < d; ++j) s += z[j] * pts[i][j];
    double viol = 1.0 - ys[i] * s;
    if (viol > 0.0) f += c_pen * viol * viol;
  }
  return f;
}

}  // namespace

bool linearly_separable(const std::vector<la::Vec>& x_plus, const std::vector<la::Vec>& x_minus) {
  if (x_plus.empty() || x_minus.empty()) return true;
  const int d = static_cast<int>(x_plus.empty() ? x_minus[0].size() : x_plus[0].size());
  const int n_vars = 2 * d + 2;
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  add_margin_rows(x_plus, x_minus, d, n_vars, A, b);
  for (int v = 0; v < n_vars; ++v) {
    std::vector<double> row(n_vars, 0.0);
    row[v] = 1.0;
    A.push_back(std::move(row));
    b.push_back(kBoxBound);
  }
  return lp::feasible(A, b);
}

LinearModel max_margin_classifier(const std::vector<la::Vec>& x_plus,
                                  const std::vector<la::Vec>& x_minus) {
  if (x_plus.empty() || x_minus.empty())
    throw std::invalid_argument("max_margin_classifier needs both classes");
  const int d = static_cast<int>(x_plus[0].size());

  // Stage 1: min ||w||_inf subject to unit-margin constraints. Doubles as the
  // separability check and gives a feasible Newton start.
  const int n_vars = 2 * d + 3;  // w+, w-, b+, b-, u
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  add_margin_rows(x_plus, x_minus, d, n_vars, A, b);
  for (int j = 0; j < d; ++j) {  // w+_j + w-_j <= u
    std::vector<double> row(n_vars, 0.0);
    row[j] = 1.0;
    row[d + j] = 1.0;
    row[2 * d + 2] = -1.0;
    A.push_back(std::move(row));
    b.push_back(0.0);
  }
  for (int v = 0; v < n_vars; ++v) {
    std::vector<double> row(n_vars, 0.0);
    row[v] = 1.0;
    A.push_back(std::move(row));
    b.push_back(kBoxBound);
  }
  std::vector<double> cost(n_vars, 0.0);
  cost[2 * d + 2] = 1.0;
  auto lp_res = lp::solve(A, b, cost);
  if (lp_res.status == lp::Status::Infeasible)
    throw NotRealizableError("classes are not linearly separable");
  if (lp_res.status != lp::Status::Optimal)
    throw NumericalDegeneracyError("max-margin LP did not solve");

  // z = (w, b) in one vector, b last.
  la::Vec z(d + 1, 0.0);
  for (int j = 0; j < d; ++j) z[j] = lp_res.x[j] - lp_res.x[d + j];
  z[d] = lp_res.x[2 * d] - lp_res.x[2 * d + 1];

  std::vector<la::Vec> pts;
  std::vector<double> ys;
  for (const auto& x : x_plus) pts.push_back(x), ys.push_back(1.0);
  for (const auto& x : x_minus) pts.push_back(x), ys.push_back(-1.0);

  // Stage 2: Newton with backtracking on the squared-hinge penalty
  // 0.5||w||^2 + C sum max(0, 1 - y(w.x+b))^2; as C grows this pinches onto
  // the hard-margin optimum (slack ~ 1/C).
  const double c_pen = 1e8;
  double f = hinge_objective(pts, ys, z, d, c_pen);
  for (int iter = 0; iter < 200; ++iter) {
    la::Vec g(d + 1, 0.0);
    la::Mat H(d + 1, la::Vec(d + 1, 0.0));
    for (int j = 0; j < d; ++j) {
      g[j] = z[j];
      H[j][j] = 1.0;
    }
    for (size_t i = 0; i < pts.size(); ++i) {
      double s = z[d];
      for (int j = 0; j < d; ++j) s += z[j] * pts[i][j];
      double viol = 1.0 - ys[i] * s;
      if (viol <= 0.0) continue;
      la::Vec xt(d + 1, 1.0);
      for (int j = 0; j < d; ++j) xt[j] = pts[i][j];
      for (int j = 0; j <= d; ++j) {
        g[j] -= 2.0 * c_pen * ys[i] * viol * xt[j];
        for (int l = 0; l <= d; ++l) H[j][l] += 2.0 * c_pen * xt[j] * xt[l];
      }
    }
    for (int j = 0; j <= d; ++j) H[j][j] += 1e-8;

    la::Vec p = la::solve(H, g);
    for (auto& v : p) v = -v;
    double gp = la::dot(g, p);
    if (gp > -1e-14 * (1.0 + std::abs(f))) break;

    double t = 1.0;
    la::Vec z_new = z;
    double f_new = f;
    while (t > 1e-14) {
      for (int j = 0; j <= d; ++j) z_new[j] = z[j] + t * p[j];
      f_new = hinge_objective(pts, ys, z_new, d, c_pen);
      if (f_new <= f + 1e-4 * t * gp) break;
      t *= 0.5;
    }
    if (f_new >= f) break;
    z = z_new;
    double drop = f - f_new;
    f = f_new;
    if (drop < 1e-12 * (1.0 + std::abs(f))) break;
  }

  // Rescale so the smallest functional margin is exactly 1.
  double min_margin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < pts.size(); ++i) {
    double s = z[d];
    for (int j = 0; j < d; ++j) s += z[j] * pts[i][j];
    min_margin = std::min(min_margin, ys[i] * s);
  }
  if (!(min_margin > 0.0))
    throw NumericalDegeneracyError("max-margin refinement lost separation");
  LinearModel model;
  model.w.resize(d);
  for (int j = 0; j < d; ++j) model.w[j] = z[j] / min_margin;
  model.b = z[d] / min_margin;
  return model;
}

la::Mat orthogonal_completion(const la::Vec& w, double b) {
  la::Vec u(w.size() + 1);
  u[0] = b;
  for (size_t i = 0; i < w.size(); ++i) u[i + 1] = w[i];
  return la::orthogonal_completion_householder(u);
}

la::Mat apply_projective_map(const std::vector<la::Vec>& x_minus,
                             const std::vector<la::Vec>& x_plus, const la::Mat& u) {
  const int d1 = static_cast<int>(u.size());  // d + 1
  la::Mat out;
  out.reserve(x_minus.size() + x_plus.size());
  auto map_one = [&](const la::Vec& x) {
    la::Vec lifted(d1, 1.0);
    for (int j = 1; j < d1; ++j) lifted[j] = x[j - 1];
    la::Vec row(d1, 0.0);
    for (int j = 0; j < d1; ++j)
      for (int l = 0; l < d1; ++l) row[l] += lifted[j] * u[j][l];
    if (std::abs(row[0]) < 1e-9)
      throw NumericalDegeneracyError("projective map denominator below 1e-9");
    la::Vec img(d1 - 1);
    for (int l = 1; l < d1; ++l) img[l - 1] = row[l] / row[0];
    out.push_back(std::move(img));
  };
  for (const auto& x : x_minus) map_one(x);
  for (const auto& x : x_plus) map_one(x);
  return out;
}

std::optional<SeparationCertificate> separation_lp(const la::Vec& x_j,
                                                   const std::vector<la::Vec>& hull_points) {
  const int d = static_cast<int>(x_j.size());
  const int n_vars = 2 * d + 2;  // v+, v-, t+, t-
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (const auto& h : hull_points) {  // v.h - t <= 0
    std::vector<double> row(n_vars, 0.0);
    for (int j = 0; j < d; ++j) {
      row[j] = h[j];
      row[d + j] = -h[j];
    }
    row[2 * d] = -1.0;
    row[2 * d + 1] = 1.0;
    A.push_back(std::move(row));
    b.push_back(0.0);
  }
  {  // v.x_j >= t + 1
    std::vector<double> row(n_vars, 0.0);
    for (int j = 0; j < d; ++j) {
      row[j] = -x_j[j];
      row[d + j] = x_j[j];
    }
    row[2 * d] = 1.0;
    row[2 * d + 1] = -1.0;
    A.push_back(std::move(row));
    b.push_back(-1.0);
  }
  for (int j = 0; j < 2 * d; ++j) {
    std::vector<double> row(n_vars, 0.0);
    row[j] = 1.0;
    A.push_back(std::move(row));
    b.push_back(kBoxBound);
  }
  auto res = lp::solve(A, b, std::vector<double>(n_vars, 0.0));
  if (res.status == lp::Status::Infeasible) return std::nullopt;
  if (res.status != lp::Status::Optimal)
    throw NumericalDegeneracyError("separation LP did not solve");

  SeparationCertificate cert;
  cert.v.resize(d);
  for (int j = 0; j < d; ++j) cert.v[j] = res.x[j] - res.x[d + j];
  double best_hull = -std::numeric_limits<double>::infinity();
  for (const auto& h : hull_points) best_hull = std::max(best_hull, la::dot(cert.v, h));
  if (hull_points.empty()) best_hull = res.x[2 * d] - res.x[2 * d + 1];
  cert.margin = la::dot(cert.v, x_j) - best_hull;
  return cert;
}

bool in_convex_hull(const la::Vec& x, const std::vector<la::Vec>& points) {
  if (points.empty()) return false;
  const int d = static_cast<int>(x.size());
  const int n = static_cast<int>(points.size());
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (int sgn : {+1, -1}) {
    for (int j = 0; j < d; ++j) {
      std::vector<double> row(n, 0.0);
      for (int i = 0; i < n; ++i) row[i] = sgn * points[i][j];
      A.push_back(std::move(row));
      b.push_back(sgn * x[j]);
    }
    A.push_back(std::vector<double>(n, static_cast<double>(sgn)));
    b.push_back(static_cast<double>(sgn));
  }
  return lp::feasible(A, b);
}

std::vector<int> extremal_points(const la::Mat& points) {
  const int n = static_cast<int>(points.size());
  if (n == 0) return {};

  // collapse exact duplicates; every duplicate of an extreme point is extreme
  std::map<la::Vec, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[points[i]].push_back(i);
  std::vector<la::Vec> uniq;
  std::vector<const std::vector<int>*> members;
  for (auto& [pt, idx] : groups) {
    uniq.push_back(pt);
    members.push_back(&idx);
  }
  const int u = static_cast<int>(uniq.size());

  auto lex_greater = [](const la::Vec& a, const la::Vec& b) {
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  };

  // Centre and scale into [-1,1]^d so LP tolerances mean the same thing
  // regardless of how far the projective map flung the points.
  const int d = static_cast<int>(uniq[0].size());
  la::Vec centroid(d, 0.0);
  for (const auto& p : uniq)
    for (int j = 0; j < d; ++j) centroid[j] += p[j] / u;
  double spread = 0.0;
  for (const auto& p : uniq)
    for (int j = 0; j < d; ++j) spread = std::max(spread, std::abs(p[j] - centroid[j]));
  if (spread == 0.0) spread = 1.0;
  std::vector<la::Vec> pts(uniq);
  for (auto& p : pts)
    for (int j = 0; j < d; ++j) p[j] = (p[j] - centroid[j]) / spread;

  std::vector<bool> in_hull(u, false);
  if (u == 1) {
    in_hull[0] = true;
  } else {
    int first = 0;
    for (int i = 1; i < u; ++i) {
      if (uniq[i][0] > uniq[first][0] ||
          (uniq[i][0] == uniq[first][0] && lex_greater(uniq[i], uniq[first])))
        first = i;
    }
    in_hull[first] = true;
    std::vector<int> hull_idx{first};

    for (int j = 0; j < u; ++j) {
      while (!in_hull[j]) {
        std::vector<la::Vec> hull_pts;
        for (int i : hull_idx) hull_pts.push_back(pts[i]);
        std::optional<SeparationCertificate> cert;
        bool lp_failed = false;
        try {
          cert = separation_lp(pts[j], hull_pts);
        } catch (const NumericalDegeneracyError&) {
          lp_failed = true;
        }
        if (!lp_failed && !cert) break;  // j lies in the hull of confirmed vertices
        if (lp_failed || cert->margin < 0.5) {
          // the LP asked for margin 1, so a weak certificate means roundoff
          // is deciding; settle j with the better-conditioned membership LP
          std::vector<la::Vec> others;
          for (int k = 0; k < u; ++k)
            if (k != j) others.push_back(pts[k]);
          if (in_convex_hull(pts[j], others)) break;
          in_hull[j] = true;
          hull_idx.push_back(j);
          break;
        }
        // the lexicographically-largest maximizer of v.x is itself a vertex
        int best = -1;
        double best_val = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < u; ++k) {
          if (in_hull[k]) continue;
          double val = la::dot(cert->v, pts[k]);
          if (best < 0 || val > best_val + 1e-12 ||
              (std::abs(val - best_val) <= 1e-12 && lex_greater(uniq[k], uniq[best]))) {
            best = k;
            best_val = std::max(best_val, val);
          }
        }
        in_hull[best] = true;
        hull_idx.push_back(best);
      }
    }
  }

  std::vector<int> result;
  for (int i = 0; i < u; ++i)
    if (in_hull[i])
      for (int orig : *members[i]) result.push_back(orig);
  std::sort(result.begin(), result.end());
  return result;
}

namespace {

void split_instance(const Instance& inst, std::vector<la::Vec>& x_plus,
                    std::vector<la::Vec>& x_minus, std::vector<DocId>& minus_ids) {
  for (int i = 0; i < inst.n(); ++i) {
    if (inst.truth[i] == 1) {
      x_plus.push_back(inst.documents[i].features);
    } else {
      x_minus.push_back(inst.documents[i].features);
      minus_ids.push_back(inst.documents[i].id);
    }
  }
}

}  // namespace

std::vector<DocId> critical_points_fast(const Instance& inst) {
  std::vector<la::Vec> x_plus, x_minus;
  std::vector<DocId> minus_ids;
  split_instance(inst, x_plus, x_minus, minus_ids);
  if (x_minus.empty()) return {};

  std::vector<int> extreme;
  if (x_plus.empty()) {
    // flipping x keeps separability iff x is a vertex of the negative hull
    extreme = extremal_points(x_minus);
  } else {
    auto model = max_margin_classifier(x_plus, x_minus);
    auto u = orthogonal_completion(model.w, model.b);
    auto mapped = apply_projective_map(x_minus, x_plus, u);
    extreme = extremal_points(mapped);
  }

  std::vector<DocId> out;
  for (int idx : extreme)
    if (idx < static_cast<int>(x_minus.size())) out.push_back(minus_ids[idx]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<DocId> critical_points_naive(const Instance& inst) {
  std::vector<la::Vec> x_plus, x_minus;
  std::vector<DocId> minus_ids;
  split_instance(inst, x_plus, x_minus, minus_ids);
  if (!linearly_separable(x_plus, x_minus))
    throw NotRealizableError("classes are not linearly separable");
  std::vector<DocId> out;
  for (size_t i = 0; i < x_minus.size(); ++i) {
    auto plus = x_plus;
    plus.push_back(x_minus[i]);
    std::vector<la::Vec> minus;
    for (size_t l = 0; l < x_minus.size(); ++l)
      if (l != i) minus.push_back(x_minus[l]);
    if (linearly_separable(plus, minus)) out.push_back(minus_ids[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace edisc
