#include "edisc/core_model.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace edisc {

int Instance::n_plus() const {
  int c = 0;
  for (Label l : truth) c += (l == 1);
  return c;
}

Label Instance::truth_of(DocId id) const {
  int i = index_of(id);
  if (i < 0) throw std::invalid_argument("unknown document id");
  return truth[i];
}

int Instance::index_of(DocId id) const {
  for (int i = 0; i < n(); ++i)
    if (documents[i].id == id) return i;
  return -1;
}

void Instance::validate() const {
  if (documents.size() != truth.size())
    throw std::invalid_argument("truth must cover exactly the documents");
  std::unordered_set<DocId> seen;
  for (const auto& d : documents) {
    if (!seen.insert(d.id).second) throw std::invalid_argument("duplicate document id");
    if (static_cast<int>(d.features.size()) != dim)
      throw std::invalid_argument("inconsistent feature dimension");
  }
  if (dim < 1 && !documents.empty()) throw std::invalid_argument("dimension must be >= 1");
  for (Label l : truth)
    if (l != 1 && l != -1) throw std::invalid_argument("labels must be -1 or +1");
}

int OneDimInstance::n_plus() const {
  int c = 0;
  for (Label l : labels) c += (l == 1);
  return c;
}

int OneDimInstance::index_of(DocId id) const {
  for (int i = 0; i < n(); ++i)
    if (ids[i] == id) return i;
  return -1;
}

OneDimInstance make_one_dim_instance(std::vector<DocId> ids,
                                     std::vector<double> positions,
                                     std::vector<Label> labels) {
  if (ids.size() != positions.size() || ids.size() != labels.size())
    throw std::invalid_argument("mismatched array lengths");
  std::vector<int> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (positions[a] != positions[b]) return positions[a] > positions[b];
    return ids[a] < ids[b];
  });
  OneDimInstance out;
  out.ids.reserve(ids.size());
  out.positions.reserve(ids.size());
  out.labels.reserve(ids.size());
  for (int i : order) {
    out.ids.push_back(ids[i]);
    out.positions.push_back(positions[i]);
    out.labels.push_back(labels[i]);
  }
  std::unordered_set<DocId> seen;
  for (DocId id : out.ids)
    if (!seen.insert(id).second) throw std::invalid_argument("duplicate document id");
  for (Label l : out.labels)
    if (l != 1 && l != -1) throw std::invalid_argument("labels must be -1 or +1");
  return out;
}

OneDimInstance to_one_dim(const Instance& inst) {
  if (inst.dim != 1) throw std::invalid_argument("instance is not one-dimensional");
  std::vector<DocId> ids;
  std::vector<double> pos;
  for (const auto& d : inst.documents) {
    ids.push_back(d.id);
    pos.push_back(d.features[0]);
  }
  return make_one_dim_instance(std::move(ids), std::move(pos), inst.truth);
}

Label classify(const LinearModel& model, const std::vector<double>& x) {
  if (model.w.size() != x.size()) throw std::invalid_argument("dimension mismatch");
  double s = model.b;
  for (size_t i = 0; i < x.size(); ++i) s += model.w[i] * x[i];
  return s >= 0.0 ? 1 : -1;
}

long classifier_error(const LinearModel& model, const Instance& inst) {
  long e = 0;
  for (int i = 0; i < inst.n(); ++i)
    e += (classify(model, inst.documents[i].features) != inst.truth[i]);
  return e;
}

namespace {

// sign(x - t) with sign(0) = +1; t = +inf puts everything on the negative side
inline Label threshold_label(double x, double t) {
  if (t == kThresholdInfinity) return -1;
  return x - t >= 0.0 ? 1 : -1;
}

long err_against(const OneDimInstance& inst, const std::vector<Label>& labels, double t) {
  long e = 0;
  for (int i = 0; i < inst.n(); ++i)
    e += (labels[i] != threshold_label(inst.positions[i], t));
  return e;
}

// Scans candidates {positions} u {+inf} once, exploiting the descending sort:
// err(candidate below) = err(candidate above) + (label flips in between).
// pick_largest selects the largest minimizer, otherwise the smallest.
std::pair<double, long> scan_optimal(const OneDimInstance& inst, const std::vector<Label>& labels,
                                     bool pick_largest) {
  if (inst.n() == 0) throw std::invalid_argument("empty instance");
  // start from t = +inf: everything negative
  long err = 0;
  for (Label l : labels) err += (l == 1);
  double best_t = kThresholdInfinity;
  long best_err = err;
  // moving the threshold down to position[i] flips documents at positions in
  // [positions[i], previous candidate) to the positive side
  long cur = err;
  int i = 0;
  const int n = inst.n();
  while (i < n) {
    double p = inst.positions[i];
    int j = i;
    while (j < n && inst.positions[j] == p) {
      cur += (labels[j] == 1) ? -1 : +1;
      ++j;
    }
    bool better = pick_largest ? (cur < best_err) : (cur <= best_err);
    if (better) {
      best_err = cur;
      best_t = p;
    }
    i = j;
  }
  // strict improvement keeps the first (largest) minimizer seen; with ties
  // allowed the scan keeps moving down to the smallest minimizer
  return {best_t, best_err};
}

}  // namespace

long threshold_error(const OneDimInstance& inst, double t) {
  return err_against(inst, inst.labels, t);
}

long threshold_error_report(const OneDimInstance& inst, const std::vector<Label>& report,
                            double t) {
  if (report.size() != inst.labels.size()) throw std::invalid_argument("incomplete report");
  return err_against(inst, report, t);
}

std::pair<double, long> optimal_threshold_true(const OneDimInstance& inst) {
  return scan_optimal(inst, inst.labels, /*pick_largest=*/true);
}

std::pair<double, long> optimal_threshold_report(const OneDimInstance& inst,
                                                 const std::vector<Label>& report) {
  if (report.size() != inst.labels.size()) throw std::invalid_argument("incomplete report");
  return scan_optimal(inst, report, /*pick_largest=*/false);
}

ThresholdAnalysis analyze_thresholds(const OneDimInstance& inst, const std::vector<Label>& report) {
  ThresholdAnalysis a;
  auto [t, e] = optimal_threshold_true(inst);
  a.t_star = t;
  a.err_star = e;
  auto [ta, ea] = optimal_threshold_report(inst, report);
  a.t_star_report = ta;
  a.err_report = ea;
  return a;
}

namespace {

template <typename LabelOf>
std::pair<long, long> revealed_counts(const ProtocolOutcome& outcome, LabelOf label_of) {
  long pos = 0, neg = 0;
  for (DocId id : outcome.revealed) {
    if (label_of(id) == 1)
      ++pos;
    else
      ++neg;
  }
  return {pos, neg};
}

}  // namespace

double recall(const ProtocolOutcome& outcome, const Instance& inst) {
  int np = inst.n_plus();
  if (np == 0) throw std::domain_error("recall undefined: no responsive documents");
  std::unordered_map<DocId, Label> truth;
  for (int i = 0; i < inst.n(); ++i) truth[inst.documents[i].id] = inst.truth[i];
  auto [pos, neg] = revealed_counts(outcome, [&](DocId id) { return truth.at(id); });
  (void)neg;
  return static_cast<double>(pos) / np;
}

double recall(const ProtocolOutcome& outcome, const OneDimInstance& inst) {
  int np = inst.n_plus();
  if (np == 0) throw std::domain_error("recall undefined: no responsive documents");
  std::unordered_map<DocId, Label> truth;
  for (int i = 0; i < inst.n(); ++i) truth[inst.ids[i]] = inst.labels[i];
  auto [pos, neg] = revealed_counts(outcome, [&](DocId id) { return truth.at(id); });
  (void)neg;
  return static_cast<double>(pos) / np;
}

long nrd(const ProtocolOutcome& outcome, const Instance& inst) {
  std::unordered_map<DocId, Label> truth;
  for (int i = 0; i < inst.n(); ++i) truth[inst.documents[i].id] = inst.truth[i];
  auto [pos, neg] = revealed_counts(outcome, [&](DocId id) { return truth.at(id); });
  (void)pos;
  return neg;
}

long nrd(const ProtocolOutcome& outcome, const OneDimInstance& inst) {
  std::unordered_map<DocId, Label> truth;
  for (int i = 0; i < inst.n(); ++i) truth[inst.ids[i]] = inst.labels[i];
  auto [pos, neg] = revealed_counts(outcome, [&](DocId id) { return truth.at(id); });
  (void)pos;
  return neg;
}

}  // namespace edisc
