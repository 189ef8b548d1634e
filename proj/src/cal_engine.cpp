#include "edisc/cal_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "edisc/rng.hpp"

namespace edisc {

namespace {

double svm_objective(const std::vector<std::pair<la::Vec, Label>>& labeled, const la::Vec& w,
                     double b, double lambda) {
  double obj = 0.5 * lambda * la::dot(w, w);
  double hinge = 0.0;
  for (const auto& [x, y] : labeled) {
    double m = 1.0 - y * (la::dot(w, x) + b);
    if (m > 0.0) hinge += m;
  }
  return obj + hinge / static_cast<double>(labeled.size());
}

}  // namespace

TrainResult train_linear_svm(const std::vector<std::pair<la::Vec, Label>>& labeled,
                             const SvmConfig& cfg) {
  if (labeled.empty()) throw std::invalid_argument("no training examples");
  if (!(cfg.regularization > 0.0)) throw std::invalid_argument("regularization must be positive");
  const int d = static_cast<int>(labeled[0].first.size());
  const int m = static_cast<int>(labeled.size());

  bool any_pos = false, any_neg = false;
  for (const auto& [x, y] : labeled) (y == 1 ? any_pos : any_neg) = true;

  TrainResult result;
  if (!any_pos || !any_neg) {
    // point every example's margin the right way along the class mean
    la::Vec mean(d, 0.0);
    for (const auto& [x, y] : labeled)
      for (int j = 0; j < d; ++j) mean[j] += x[j] / m;
    double nrm = la::norm2(mean);
    la::Vec w(d, 0.0);
    if (nrm > 1e-12) {
      for (int j = 0; j < d; ++j) w[j] = mean[j] / nrm;
    } else {
      w[0] = 1.0;
    }
    double sign = any_pos ? 1.0 : -1.0;
    for (int j = 0; j < d; ++j) w[j] *= sign;
    double extreme = any_pos ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : labeled) {
      double s = la::dot(w, x);
      extreme = any_pos ? std::min(extreme, s) : std::max(extreme, s);
    }
    result.model.w = w;
    result.model.b = any_pos ? 1.0 - extreme : -1.0 - extreme;
    result.single_class = true;
    return result;
  }

  la::Vec w(d, 0.0);
  double b = 0.0;
  const double lambda = cfg.regularization;
  double obj = svm_objective(labeled, w, b, lambda);
  result.epoch_objectives.push_back(obj);

  for (int t = 0; t < cfg.epochs; ++t) {
    la::Vec gw(d, 0.0);
    double gb = 0.0;
    for (int j = 0; j < d; ++j) gw[j] = lambda * w[j];
    for (const auto& [x, y] : labeled) {
      if (y * (la::dot(w, x) + b) < 1.0) {
        for (int j = 0; j < d; ++j) gw[j] -= y * x[j] / m;
        gb -= static_cast<double>(y) / m;
      }
    }

    // backtrack the scheduled step until the objective does not increase
    double eta = cfg.eta0 / (1.0 + cfg.decay * t);
    la::Vec w_new(d);
    double b_new = 0.0, obj_new = obj;
    bool moved = false;
    for (int h = 0; h < 40; ++h) {
      for (int j = 0; j < d; ++j) w_new[j] = w[j] - eta * gw[j];
      b_new = b - eta * gb;
      obj_new = svm_objective(labeled, w_new, b_new, lambda);
      if (obj_new <= obj) {
        moved = true;
        break;
      }
      eta *= 0.5;
    }
    if (moved) {
      w = w_new;
      b = b_new;
      obj = obj_new;
    }
    result.epoch_objectives.push_back(obj);
  }

  result.model.w = std::move(w);
  result.model.b = b;
  return result;
}

double score(const LinearModel& model, const la::Vec& x) {
  if (model.w.size() != x.size()) throw std::invalid_argument("dimension mismatch");
  return la::dot(model.w, x);
}

OneDimInstance select_top_n(const Instance& corpus, const std::set<DocId>& excluded,
                            const LinearModel& model, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  std::vector<DocId> ids;
  std::vector<double> positions;
  std::vector<Label> labels;
  std::vector<int> order;
  std::vector<double> scores;
  for (int i = 0; i < corpus.n(); ++i) {
    if (excluded.count(corpus.documents[i].id)) continue;
    order.push_back(i);
    scores.push_back(score(model, corpus.documents[i].features));
  }
  if (order.empty()) throw std::invalid_argument("no documents remain");

  std::vector<int> rank(order.size());
  for (size_t i = 0; i < rank.size(); ++i) rank[i] = static_cast<int>(i);
  std::sort(rank.begin(), rank.end(), [&](int a, int bb) {
    if (scores[a] != scores[bb]) return scores[a] > scores[bb];
    return corpus.documents[order[a]].id < corpus.documents[order[bb]].id;
  });
  int take = std::min<int>(n, static_cast<int>(rank.size()));
  for (int i = 0; i < take; ++i) {
    int idx = order[rank[i]];
    ids.push_back(corpus.documents[idx].id);
    positions.push_back(scores[rank[i]]);
    labels.push_back(corpus.truth[idx]);
  }
  return make_one_dim_instance(std::move(ids), std::move(positions), std::move(labels));
}

namespace {

ProtocolOutcome run_subprotocol(const OneDimInstance& sub, const CalConfig& cfg,
                                const CalParties& parties, Rng& rng) {
  switch (cfg.subprotocol) {
    case Subprotocol::RevealAll:
      return run_reveal_all(sub, parties.bob, rng);
    case Subprotocol::LabelReport:
      return run_label_report(sub, parties.alice, parties.bob, parties.court, cfg.label_cfg, rng);
    case Subprotocol::ClassifierReport:
      return run_classifier_report(sub, parties.alice, parties.bob, parties.court,
                                   cfg.classifier_cfg, rng);
  }
  throw std::logic_error("unknown subprotocol");
}

}  // namespace

CalRunRecord run_cal(const Instance& corpus, const CalConfig& cfg, const CalParties& parties,
                     uint64_t seed) {
  if (corpus.n() == 0) throw std::invalid_argument("empty corpus");
  if (cfg.iterations < 1 || cfg.batch < 1)
    throw std::invalid_argument("iterations and batch must be >= 1");

  const long corpus_pos = corpus.n_plus();
  CalRunRecord record;
  std::set<DocId> in_s;
  long cumulative_nrd = 0;
  long revealed_pos = 0;
  std::set<DocId> revealed_set;

  auto absorb = [&](int iteration, const OneDimInstance& sub, ProtocolOutcome outcome) {
    for (DocId id : outcome.revealed) {
      if (revealed_set.insert(id).second) {
        record.revealed.push_back(id);
        (corpus.truth_of(id) == 1 ? revealed_pos : cumulative_nrd)++;
      }
    }
    for (const auto& [id, label] : outcome.output_labels) {
      record.train_labels[id] = label;
      in_s.insert(id);
    }
    if (static_cast<int>(record.train_labels.size()) !=
        static_cast<int>(in_s.size()))
      throw std::logic_error("train set bookkeeping out of sync");

    CalIterationRecord it;
    it.iteration = iteration;
    it.requested = sub.ids;
    it.recall = corpus_pos > 0 ? static_cast<double>(revealed_pos) / corpus_pos : 1.0;
    it.cumulative_nrd = cumulative_nrd;
    it.full_reveal = outcome.full_reveal_triggered;
    it.outcome = std::move(outcome);
    if (!record.iterations.empty()) {
      const auto& prev = record.iterations.back();
      if (it.recall < prev.recall - 1e-12 || it.cumulative_nrd < prev.cumulative_nrd)
        throw std::logic_error("recall/NRD must be monotone across iterations");
    }
    record.iterations.push_back(std::move(it));
  };

  // seed round: uniform random batch, labeled through the subprotocol with
  // all positions at 0.0 (no classifier yet, so no meaningful scores)
  {
    Rng pick(split_seed(seed, 0));
    std::vector<int> perm(corpus.n());
    for (int i = 0; i < corpus.n(); ++i) perm[i] = i;
    int take = std::min<int>(cfg.batch, corpus.n());
    for (int i = 0; i < take; ++i) {
      int j = i + static_cast<int>(pick.below(perm.size() - i));
      std::swap(perm[i], perm[j]);
    }
    perm.resize(take);
    if (cfg.force_seed_positive) {
      bool has_pos = false;
      for (int idx : perm) has_pos = has_pos || corpus.truth[idx] == 1;
      if (!has_pos) {
        for (int i = 0; i < corpus.n(); ++i) {
          if (corpus.truth[i] == 1) {
            perm.back() = i;
            break;
          }
        }
      }
    }
    std::vector<DocId> ids;
    std::vector<Label> labels;
    for (int idx : perm) {
      ids.push_back(corpus.documents[idx].id);
      labels.push_back(corpus.truth[idx]);
    }
    auto sub = make_one_dim_instance(ids, std::vector<double>(ids.size(), 0.0), labels);
    Rng sub_rng(split_seed(seed, 1000));
    absorb(0, sub, run_subprotocol(sub, cfg, parties, sub_rng));
  }

  for (int t = 1; t <= cfg.iterations; ++t) {
    if (static_cast<int>(in_s.size()) >= corpus.n()) {
      record.truncated = true;
      break;
    }
    std::vector<std::pair<la::Vec, Label>> labeled;
    labeled.reserve(in_s.size());
    for (const auto& [id, label] : record.train_labels)
      labeled.emplace_back(corpus.documents[corpus.index_of(id)].features, label);
    auto trained = train_linear_svm(labeled, cfg.svm);

    auto sub = select_top_n(corpus, in_s, trained.model, cfg.batch);
    Rng sub_rng(split_seed(seed, 1000 + t));
    absorb(t, sub, run_subprotocol(sub, cfg, parties, sub_rng));
    if (sub.n() < cfg.batch) record.truncated = true;
  }
  return record;
}

}  // namespace edisc
