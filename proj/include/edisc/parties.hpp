#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "edisc/core_model.hpp"
#include "edisc/rng.hpp"

namespace edisc {

// Alice's per-document report, aligned with the instance's canonical order.
struct LabelReport {
  std::vector<Label> labels;
};

// Alice's threshold report: a classifier t_A plus labels for documents with
// position >= t_A (entries for positions below t_A are ignored).
struct ClassifierReport {
  double threshold = kThresholdInfinity;
  std::vector<Label> labels;
};

struct AliceStrategy {
  enum class Kind {
    Truthful,
    HideNearThreshold,        // flip the j true positives closest below t* to -1
    HideOutlierFalsePositives,  // flip the farthest-below-t* true positive to -1
    ReportThreshold,          // classifier setting: report a fixed threshold
    Scripted,                 // explicit per-document report
  };

  Kind kind = Kind::Truthful;
  int hide_count = 0;                // HideNearThreshold
  double threshold = 0.0;            // ReportThreshold
  std::map<DocId, Label> script;     // Scripted

  static AliceStrategy truthful() { return {}; }
  static AliceStrategy hide_near_threshold(int j);
  static AliceStrategy hide_outlier_false_positives();
  static AliceStrategy report_threshold(double t);
  static AliceStrategy scripted(std::map<DocId, Label> report);
};

LabelReport make_label_report(const OneDimInstance& inst, const AliceStrategy& strategy);
ClassifierReport make_classifier_report(const OneDimInstance& inst, const AliceStrategy& strategy);

// Bob labels documents; optional symmetric noise knob, excluded from
// theorem-verification runs. The court always returns the true label.
struct BobOracle {
  double error_rate = 0.0;

  Label label(Label truth, Rng& rng) const {
    if (error_rate > 0.0 && rng.uniform() < error_rate) return -truth;
    return truth;
  }
};

struct CourtOracle {
  Label settle(Label truth) const { return truth; }
};

// L_A(B) = NRD(B) + lambda * N+ * (REC(B) - 1)
struct AliceLoss {
  double lambda = 1.0;
};

double alice_loss(const ProtocolOutcome& outcome, const OneDimInstance& inst,
                  const AliceLoss& loss);

struct LabelReportConfig;  // protocols_1d.hpp

struct BestResponseResult {
  AliceStrategy strategy;
  std::vector<DocId> hidden;   // true positives the strategy flips to -1
  double expected_loss = 0.0;
  long report_err_true = 0;    // err(t*_A) of the returned report, true labels
};

// Exhaustively enumerates label reports that flip subsets of at most
// max_hidden true positives to -1, estimating each expected loss by seeded
// Monte Carlo with common random numbers across strategies.
BestResponseResult best_response_search(const OneDimInstance& inst,
                                        const LabelReportConfig& cfg,
                                        const AliceLoss& loss, int max_hidden,
                                        int trials, uint64_t root_seed);

}  // namespace edisc
