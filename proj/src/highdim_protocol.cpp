#include "edisc/highdim_protocol.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "edisc/protocols_1d.hpp"

namespace edisc {

namespace {

constexpr int kMaxDim = 3;
constexpr int kMaxDocs = 40;

// one nonzero z with A z = 0, for a d x (d+1) system (row echelon, first
// free column set to 1); empty vector if the rows are full column rank
la::Vec nullspace_vector(la::Mat a) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(a[0].size());
  std::vector<int> pivot_col(rows, -1);
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = r;
    for (int i = r + 1; i < rows; ++i)
      if (std::abs(a[i][c]) > std::abs(a[piv][c])) piv = i;
    if (std::abs(a[piv][c]) < 1e-12) continue;
    std::swap(a[piv], a[r]);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      double f = a[i][c] / a[r][c];
      for (int c2 = c; c2 < cols; ++c2) a[i][c2] -= f * a[r][c2];
    }
    pivot_col[r] = c;
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int i = 0; i < r; ++i) is_pivot[pivot_col[i]] = true;
  int free_col = -1;
  for (int c = 0; c < cols; ++c)
    if (!is_pivot[c]) {
      free_col = c;
      break;
    }
  if (free_col < 0) return {};
  la::Vec z(cols, 0.0);
  z[free_col] = 1.0;
  for (int i = r - 1; i >= 0; --i) {
    double s = a[i][free_col];
    for (int c = pivot_col[i] + 1; c < cols; ++c)
      if (is_pivot[c]) s += a[i][c] * z[c];
    z[pivot_col[i]] = -s / a[i][pivot_col[i]];
  }
  return z;
}

std::vector<Label> label_vector(const LinearModel& model, const Instance& inst) {
  std::vector<Label> out(inst.n());
  for (int i = 0; i < inst.n(); ++i)
    out[i] = classify(model, inst.documents[i].features);
  return out;
}

}  // namespace

OptimalClassifierSet enumerate_optimal_classifiers(const Instance& inst) {
  return enumerate_optimal_classifiers(inst, inst.truth);
}

OptimalClassifierSet enumerate_optimal_classifiers(const Instance& inst,
                                                   const std::vector<Label>& labels) {
  const int d = inst.dim;
  const int n = inst.n();
  if (d < 1 || d > kMaxDim || n < 1 || n > kMaxDocs)
    throw std::invalid_argument("exhaustive classifier enumeration needs d <= 3 and n <= 40");
  if (static_cast<int>(labels.size()) != n)
    throw std::invalid_argument("labels must cover all documents");

  std::map<std::vector<Label>, LinearModel> by_labeling;
  auto add_candidate = [&](la::Vec w, double b) {
    if (la::norm2(w) < 1e-12) return;
    LinearModel m{std::move(w), b};
    auto lv = label_vector(m, inst);
    by_labeling.emplace(std::move(lv), std::move(m));
  };

  double max_coord = 1.0;
  for (const auto& doc : inst.documents)
    for (double v : doc.features) max_coord = std::max(max_coord, std::abs(v));
  la::Vec e1(d, 0.0);
  e1[0] = 1.0;
  add_candidate(e1, max_coord + 1.0);   // everything positive
  add_candidate(e1, -(max_coord + 1.0));  // everything negative

  // hyperplanes through each size-d subset, nudged off the boundary both ways
  std::vector<int> subset(d);
  auto process_subset = [&]() {
    la::Mat a(d, la::Vec(d + 1, 1.0));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a[i][j] = inst.documents[subset[i]].features[j];
    la::Vec z = nullspace_vector(a);
    if (z.empty()) return;
    la::Vec w(z.begin(), z.end() - 1);
    double b = z.back();
    double wn = la::norm2(w);
    if (wn < 1e-10 * (1.0 + std::abs(b))) return;
    for (int j = 0; j < d; ++j) w[j] /= wn;
    b /= wn;

    double gap = std::numeric_limits<double>::infinity();
    const double on_tol = 1e-9 * (1.0 + max_coord);
    for (int i = 0; i < n; ++i) {
      double m = b + la::dot(w, inst.documents[i].features);
      if (std::abs(m) > on_tol) gap = std::min(gap, std::abs(m));
    }
    double eps = std::isfinite(gap) ? gap / 2.0 : 1.0;
    for (double s : {1.0, -1.0}) {
      la::Vec ws(d);
      for (int j = 0; j < d; ++j) ws[j] = s * w[j];
      add_candidate(ws, s * b + eps);
      add_candidate(std::move(ws), s * b - eps);
    }
  };
  // iterate over all increasing index tuples
  auto recurse = [&](auto&& self, int depth, int start) -> void {
    if (depth == d) {
      process_subset();
      return;
    }
    for (int i = start; i < n; ++i) {
      subset[depth] = i;
      self(self, depth + 1, i + 1);
    }
  };
  recurse(recurse, 0, 0);

  OptimalClassifierSet result;
  long best = n + 1;
  for (const auto& [lv, model] : by_labeling) {
    long err = 0;
    for (int i = 0; i < n; ++i) err += lv[i] != labels[i];
    if (err < best) {
      best = err;
      result.classifiers.clear();
    }
    if (err == best) result.classifiers.push_back(model);
  }
  result.err_star = best;
  return result;
}

double distance_to_hyperplane_union(const la::Vec& x, const OptimalClassifierSet& optima) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& h : optima.classifiers)
    best = std::min(best, std::abs(h.b + la::dot(h.w, x)) / la::norm2(h.w));
  return best;
}

double distance_to_positive_intersection(const la::Vec& x, const OptimalClassifierSet& optima) {
  const int d = static_cast<int>(x.size());
  const int hcount = static_cast<int>(optima.classifiers.size());
  std::vector<la::Vec> a(hcount);
  la::Vec c(hcount);
  for (int h = 0; h < hcount; ++h) {
    double wn = la::norm2(optima.classifiers[h].w);
    a[h].resize(d);
    for (int j = 0; j < d; ++j) a[h][j] = optima.classifiers[h].w[j] / wn;
    c[h] = optima.classifiers[h].b / wn;
  }
  const double tol = 1e-7 * (1.0 + la::norm2(x));

  auto inside = [&](const la::Vec& z) {
    for (int h = 0; h < hcount; ++h)
      if (c[h] + la::dot(a[h], z) < -tol) return false;
    return true;
  };
  if (inside(x)) return 0.0;

  // project via KKT active-set enumeration: z = x + sum lambda_h a_h with
  // lambda >= 0 and the active constraints tight
  double best = std::numeric_limits<double>::infinity();
  int max_active = std::min(d, hcount);
  std::vector<int> active;
  auto try_active = [&]() {
    const int m = static_cast<int>(active.size());
    la::Mat gram(m, la::Vec(m, 0.0));
    la::Vec rhs(m, 0.0);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) gram[i][j] = la::dot(a[active[i]], a[active[j]]);
      rhs[i] = -c[active[i]] - la::dot(a[active[i]], x);
    }
    la::Vec lambda;
    try {
      lambda = la::solve(gram, rhs);
    } catch (const std::runtime_error&) {
      return;
    }
    for (double l : lambda)
      if (l < -tol) return;
    la::Vec z = x;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < d; ++j) z[j] += lambda[i] * a[active[i]][j];
    if (!inside(z)) return;
    la::Vec diff(d);
    for (int j = 0; j < d; ++j) diff[j] = z[j] - x[j];
    best = std::min(best, la::norm2(diff));
  };
  auto recurse = [&](auto&& self, int start) -> void {
    if (!active.empty()) try_active();
    if (static_cast<int>(active.size()) == max_active) return;
    for (int h = start; h < hcount; ++h) {
      active.push_back(h);
      self(self, h + 1);
      active.pop_back();
    }
  };
  recurse(recurse, 0);
  return best;
}

ProtocolOutcome run_highdim_sampling(const Instance& inst, const std::vector<Label>& report,
                                     const BobOracle& bob, const CourtOracle& court,
                                     const HighDimConfig& cfg, Rng& rng) {
  const int n = inst.n();
  if (n == 0) throw std::invalid_argument("empty instance");
  if (static_cast<int>(report.size()) != n)
    throw std::invalid_argument("report must cover all documents");

  auto optima = enumerate_optimal_classifiers(inst, report);
  const double c = sampling_constant_label(optima.err_star, cfg.k, cfg.delta);

  ProtocolOutcome out;
  std::vector<char> revealed(n, 0), checked(n, 0);
  std::vector<Label> court_label(n, 0);
  out.transcript.push_back({EventType::ReportReceived});

  auto reveal = [&](int i) {
    if (revealed[i]) return;
    revealed[i] = 1;
    out.revealed.push_back(inst.documents[i].id);
    out.transcript.push_back({EventType::Revealed, inst.documents[i].id});
  };
  auto verify = [&](int i, Label alice_label) {
    checked[i] = 1;
    Label bl = bob.label(inst.truth[i], rng);
    if (bl == alice_label) return alice_label;
    Label decision = court.settle(inst.truth[i]);
    court_label[i] = decision;
    out.court_settled[inst.documents[i].id] = decision;
    out.transcript.push_back({EventType::SentToCourt, inst.documents[i].id, 0.0, decision});
    return decision;
  };
  auto full_reveal = [&]() {
    out.full_reveal_triggered = true;
    out.transcript.push_back(
        {EventType::FullReveal, 0, 0.0, 0, FullRevealReason::HiddenPositiveConfirmed});
    for (int i = 0; i < n; ++i) {
      reveal(i);
      if (!court_label[i] && !checked[i]) verify(i, report[i]);
    }
  };

  std::vector<char> classified_pos(n, 0);
  for (int i = 0; i < n; ++i)
    for (const auto& h : optima.classifiers)
      if (classify(h, inst.documents[i].features) == 1) {
        classified_pos[i] = 1;
        break;
      }

  // phase 1: every Alice-positive and everything some optimum calls positive
  bool done = false;
  for (int i = 0; i < n && !done; ++i) {
    if (report[i] != 1 && !classified_pos[i]) continue;
    reveal(i);
    Label settled = verify(i, report[i]);
    if (settled == 1 && report[i] == -1) {
      full_reveal();
      done = true;
    }
  }

  // phase 2: walk the all-negative region by distance to the optima union
  if (!done) {
    struct WalkDoc {
      int idx;
      double d_union;
      double d_intersection;
    };
    std::vector<WalkDoc> walk;
    for (int i = 0; i < n; ++i) {
      if (report[i] == 1 || classified_pos[i]) continue;
      const auto& x = inst.documents[i].features;
      walk.push_back({i, distance_to_hyperplane_union(x, optima),
                      distance_to_positive_intersection(x, optima)});
    }
    auto key_less = [&](double dist_a, DocId id_a, double dist_b, DocId id_b) {
      if (dist_a != dist_b) return dist_a < dist_b;
      return id_a < id_b;
    };
    std::sort(walk.begin(), walk.end(), [&](const WalkDoc& a, const WalkDoc& b) {
      return key_less(a.d_union, inst.documents[a.idx].id, b.d_union, inst.documents[b.idx].id);
    });
    for (const auto& doc : walk) {
      // n(x): walked negatives whose distance to the positive-side
      // intersection is below this document's distance to the union;
      // in 1-D both distances coincide and this is the walk rank
      long rank = 1;
      for (const auto& other : walk)
        if (other.idx != doc.idx &&
            key_less(other.d_intersection, inst.documents[other.idx].id, doc.d_union,
                     inst.documents[doc.idx].id))
          ++rank;
      double p = std::min(1.0, c / static_cast<double>(rank));
      double u = rng.uniform();  // one variate per walk step
      if (u >= p) continue;
      out.transcript.push_back({EventType::Sampled, inst.documents[doc.idx].id, p});
      reveal(doc.idx);
      if (verify(doc.idx, -1) == 1) {
        full_reveal();
        break;
      }
    }
  }

  for (int i = 0; i < n; ++i)
    out.output_labels[inst.documents[i].id] = court_label[i] ? court_label[i] : report[i];
  out.transcript.push_back({EventType::Stopped});
  return out;
}

ProtocolOutcome run_highdim_sampling(const Instance& inst, const AliceStrategy& alice,
                                     const BobOracle& bob, const CourtOracle& court,
                                     const HighDimConfig& cfg, Rng& rng) {
  std::vector<Label> report;
  switch (alice.kind) {
    case AliceStrategy::Kind::Truthful:
      report = inst.truth;
      break;
    case AliceStrategy::Kind::Scripted:
      for (const auto& doc : inst.documents) {
        auto it = alice.script.find(doc.id);
        if (it == alice.script.end())
          throw std::invalid_argument("scripted report missing a document");
        report.push_back(it->second);
      }
      break;
    default:
      throw std::invalid_argument("strategy has no d-dimensional report");
  }
  return run_highdim_sampling(inst, report, bob, court, cfg, rng);
}

bool check_consistency(const LinearModel& h_star, const OptimalClassifierSet& report_optima,
                       const Instance& inst) {
  const int d = inst.dim;
  const int hcount = static_cast<int>(report_optima.classifiers.size());
  std::vector<la::Vec> a(hcount);
  la::Vec c(hcount);
  for (int h = 0; h < hcount; ++h) {
    double wn = la::norm2(report_optima.classifiers[h].w);
    a[h].resize(d);
    for (int j = 0; j < d; ++j) a[h][j] = report_optima.classifiers[h].w[j] / wn;
    c[h] = report_optima.classifiers[h].b / wn;
  }
  auto in_intersection = [&](const la::Vec& z, double tol) {
    for (int h = 0; h < hcount; ++h)
      if (c[h] + la::dot(a[h], z) < -tol) return false;
    return true;
  };
  auto on_positive_side = [&](const la::Vec& z, double tol) {
    return h_star.b + la::dot(h_star.w, z) >= -tol * la::norm2(h_star.w);
  };

  for (const auto& doc : inst.documents) {
    double tol = 1e-7 * (1.0 + la::norm2(doc.features));
    if (in_intersection(doc.features, tol) && !on_positive_side(doc.features, tol)) return false;
  }

  // vertices: tight size-d constraint subsets that satisfy the rest
  if (hcount >= d) {
    std::vector<int> subset;
    bool ok = true;
    auto recurse = [&](auto&& self, int start) -> void {
      if (!ok) return;
      if (static_cast<int>(subset.size()) == d) {
        la::Mat sys(d, la::Vec(d, 0.0));
        la::Vec rhs(d, 0.0);
        for (int i = 0; i < d; ++i) {
          sys[i] = a[subset[i]];
          rhs[i] = -c[subset[i]];
        }
        la::Vec v;
        try {
          v = la::solve(sys, rhs);
        } catch (const std::runtime_error&) {
          return;
        }
        double tol = 1e-7 * (1.0 + la::norm2(v));
        if (in_intersection(v, tol) && !on_positive_side(v, tol)) ok = false;
        return;
      }
      for (int h = start; h < hcount; ++h) {
        subset.push_back(h);
        self(self, h + 1);
        subset.pop_back();
      }
    };
    recurse(recurse, 0);
    if (!ok) return false;
  }
  return true;
}

}  // namespace edisc
