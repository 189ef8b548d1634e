#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace edisc {

using DocId = int64_t;
using Label = int;  // +1 responsive, -1 non-responsive

inline constexpr double kThresholdInfinity = std::numeric_limits<double>::infinity();

struct Document {
  DocId id = 0;
  std::vector<double> features;
};

// A set of embedded documents plus the ground-truth label oracle.
struct Instance {
  std::vector<Document> documents;
  std::vector<Label> truth;  // aligned with documents
  int dim = 0;

  int n() const { return static_cast<int>(documents.size()); }
  int n_plus() const;
  int n_minus() const { return n() - n_plus(); }
  Label truth_of(DocId id) const;
  int index_of(DocId id) const;  // -1 if absent
  void validate() const;         // unique ids, consistent dimension, labels in {-1,+1}
};

// Single-dimensional instance, stored in canonical walk order:
// position descending, ties broken by ascending id.
struct OneDimInstance {
  std::vector<DocId> ids;
  std::vector<double> positions;
  std::vector<Label> labels;

  int n() const { return static_cast<int>(ids.size()); }
  int n_plus() const;
  int n_minus() const { return n() - n_plus(); }
  int index_of(DocId id) const;
};

// Builds a OneDimInstance in canonical order from unsorted parallel arrays.
OneDimInstance make_one_dim_instance(std::vector<DocId> ids,
                                     std::vector<double> positions,
                                     std::vector<Label> labels);

// View of a general instance with d = 1 as a OneDimInstance.
OneDimInstance to_one_dim(const Instance& inst);

struct LinearModel {
  std::vector<double> w;
  double b = 0.0;
};

struct ThresholdAnalysis {
  double t_star = kThresholdInfinity;
  double t_star_report = kThresholdInfinity;
  long err_star = 0;
  long err_report = 0;
};

enum class EventType {
  ReportReceived,
  Revealed,
  Sampled,
  SentToCourt,
  EpochReset,
  FullReveal,
  Stopped,
};

enum class FullRevealReason { HiddenPositiveConfirmed, ClassifierRejected };

struct TranscriptEvent {
  EventType type;
  DocId id = 0;
  double probability = 0.0;        // Sampled
  Label decision = 0;              // SentToCourt
  FullRevealReason reason = FullRevealReason::HiddenPositiveConfirmed;

  friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

struct ProtocolOutcome {
  std::vector<DocId> revealed;          // B, insertion order, each id once
  std::map<DocId, Label> court_settled;
  std::map<DocId, Label> output_labels;
  std::vector<TranscriptEvent> transcript;
  bool full_reveal_triggered = false;
};

// h(x) = +1 iff w.x + b >= 0
Label classify(const LinearModel& model, const std::vector<double>& x);

long classifier_error(const LinearModel& model, const Instance& inst);

// err(t) = |{x : f(x) != sign(x - t)}| with sign(0) = +1; t = +inf classifies
// everything negative.
long threshold_error(const OneDimInstance& inst, double t);
long threshold_error_report(const OneDimInstance& inst, const std::vector<Label>& report, double t);

// Largest minimizer over candidates {positions} u {+inf}, true labels.
std::pair<double, long> optimal_threshold_true(const OneDimInstance& inst);
// Smallest minimizer over the same candidates, report labels.
std::pair<double, long> optimal_threshold_report(const OneDimInstance& inst,
                                                 const std::vector<Label>& report);

ThresholdAnalysis analyze_thresholds(const OneDimInstance& inst, const std::vector<Label>& report);

// Fraction of responsive documents in the revealed set. Throws if n_plus = 0.
double recall(const ProtocolOutcome& outcome, const Instance& inst);
double recall(const ProtocolOutcome& outcome, const OneDimInstance& inst);

// Count of non-responsive documents in the revealed set.
long nrd(const ProtocolOutcome& outcome, const Instance& inst);
long nrd(const ProtocolOutcome& outcome, const OneDimInstance& inst);

}  // namespace edisc
