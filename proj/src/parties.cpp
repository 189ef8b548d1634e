#include "edisc/parties.hpp"

#include <algorithm>
#include <stdexcept>

#include "edisc/protocols_1d.hpp"

namespace edisc {

AliceStrategy AliceStrategy::hide_near_threshold(int j) {
  AliceStrategy s;
  s.kind = Kind::HideNearThreshold;
  s.hide_count = j;
  return s;
}

AliceStrategy AliceStrategy::hide_outlier_false_positives() {
  AliceStrategy s;
  s.kind = Kind::HideOutlierFalsePositives;
  return s;
}

AliceStrategy AliceStrategy::report_threshold(double t) {
  AliceStrategy s;
  s.kind = Kind::ReportThreshold;
  s.threshold = t;
  return s;
}

AliceStrategy AliceStrategy::scripted(std::map<DocId, Label> report) {
  AliceStrategy s;
  s.kind = Kind::Scripted;
  s.script = std::move(report);
  return s;
}

LabelReport make_label_report(const OneDimInstance& inst, const AliceStrategy& strategy) {
  LabelReport rep;
  rep.labels = inst.labels;
  switch (strategy.kind) {
    case AliceStrategy::Kind::Truthful:
      break;
    case AliceStrategy::Kind::HideNearThreshold: {
      auto [t_star, err_star] = optimal_threshold_true(inst);
      (void)err_star;
      int left = strategy.hide_count;
      // canonical order is position descending, so this flips the true
      // positives closest below t* first
      for (int i = 0; i < inst.n() && left > 0; ++i) {
        if (inst.labels[i] == 1 && inst.positions[i] < t_star) {
          rep.labels[i] = -1;
          --left;
        }
      }
      break;
    }
    case AliceStrategy::Kind::HideOutlierFalsePositives: {
      auto [t_star, err_star] = optimal_threshold_true(inst);
      (void)err_star;
      // the farthest true positive below t*: an outlier the sampler reaches
      // only with small probability
      int outlier = -1;
      for (int i = 0; i < inst.n(); ++i)
        if (inst.labels[i] == 1 && inst.positions[i] < t_star) outlier = i;
      if (outlier >= 0) rep.labels[outlier] = -1;
      break;
    }
    case AliceStrategy::Kind::ReportThreshold:
      for (int i = 0; i < inst.n(); ++i)
        rep.labels[i] = inst.positions[i] >= strategy.threshold ? 1 : -1;
      break;
    case AliceStrategy::Kind::Scripted:
      for (int i = 0; i < inst.n(); ++i) {
        auto it = strategy.script.find(inst.ids[i]);
        if (it == strategy.script.end())
          throw std::invalid_argument("scripted report does not cover all documents");
        rep.labels[i] = it->second;
      }
      break;
  }
  return rep;
}

ClassifierReport make_classifier_report(const OneDimInstance& inst,
                                        const AliceStrategy& strategy) {
  ClassifierReport rep;
  rep.labels = inst.labels;  // labels below the threshold are ignored
  switch (strategy.kind) {
    case AliceStrategy::Kind::Truthful: {
      auto [t_star, err_star] = optimal_threshold_true(inst);
      (void)err_star;
      rep.threshold = t_star;
      break;
    }
    case AliceStrategy::Kind::ReportThreshold:
      rep.threshold = strategy.threshold;
      break;
    default:
      throw std::invalid_argument("strategy not defined for the classifier-report setting");
  }
  return rep;
}

double alice_loss(const ProtocolOutcome& outcome, const OneDimInstance& inst,
                  const AliceLoss& loss) {
  double rec = recall(outcome, inst);
  long disclosure = nrd(outcome, inst);
  return disclosure + loss.lambda * inst.n_plus() * (rec - 1.0);
}

namespace {

void enumerate_subsets(const std::vector<int>& pool, int max_size,
                       std::vector<std::vector<int>>& out) {
  out.push_back({});
  std::vector<int> cur;
  // size-ordered lexicographic enumeration keeps tie-breaking deterministic
  for (int size = 1; size <= max_size && size <= static_cast<int>(pool.size()); ++size) {
    std::vector<int> idx(size);
    for (int i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      cur.clear();
      for (int i : idx) cur.push_back(pool[i]);
      out.push_back(cur);
      int pos = size - 1;
      while (pos >= 0 && idx[pos] == static_cast<int>(pool.size()) - size + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
}

}  // namespace

BestResponseResult best_response_search(const OneDimInstance& inst,
                                        const LabelReportConfig& cfg,
                                        const AliceLoss& loss, int max_hidden,
                                        int trials, uint64_t root_seed) {
  if (inst.n() > 30 || max_hidden > 4)
    throw std::invalid_argument("instance too large for exhaustive best-response search");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");

  std::vector<int> positive_indices;
  for (int i = 0; i < inst.n(); ++i)
    if (inst.labels[i] == 1) positive_indices.push_back(i);

  std::vector<std::vector<int>> subsets;
  enumerate_subsets(positive_indices, max_hidden, subsets);

  BobOracle bob;  // perfect labeler in the theorem regime
  CourtOracle court;

  BestResponseResult best;
  bool first = true;
  for (const auto& subset : subsets) {
    LabelReport rep;
    rep.labels = inst.labels;
    for (int i : subset) rep.labels[i] = -1;

    // common random numbers: trial t uses the same seed for every strategy
    double total = 0.0;
    for (int t = 0; t < trials; ++t) {
      Rng rng(split_seed(root_seed, t));
      ProtocolOutcome out = run_label_report(inst, rep, bob, court, cfg, rng);
      total += alice_loss(out, inst, loss);
    }
    double mean = total / trials;

    if (first || mean < best.expected_loss) {
      first = false;
      best.expected_loss = mean;
      best.hidden.clear();
      for (int i : subset) best.hidden.push_back(inst.ids[i]);
      if (subset.empty()) {
        best.strategy = AliceStrategy::truthful();
      } else {
        std::map<DocId, Label> script;
        for (int i = 0; i < inst.n(); ++i) script[inst.ids[i]] = rep.labels[i];
        best.strategy = AliceStrategy::scripted(std::move(script));
      }
      auto [t_rep, err_rep] = optimal_threshold_report(inst, rep.labels);
      (void)err_rep;
      best.report_err_true = threshold_error(inst, t_rep);
    }
  }
  return best;
}

}  // namespace edisc
