#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "edisc/core_model.hpp"
#include "edisc/linalg.hpp"
#include "edisc/parties.hpp"
#include "edisc/protocols_1d.hpp"

namespace edisc {

struct SvmConfig {
  double regularization = 1e-3;  // lambda in lambda/2 ||w||^2 + avg hinge
  int epochs = 200;
  double eta0 = 1.0;   // step schedule eta0 / (1 + decay * t)
  double decay = 0.05;
  uint64_t seed = 0;   // kept for the record; full-batch training is deterministic
};

enum class Subprotocol { RevealAll, LabelReport, ClassifierReport };

struct CalConfig {
  int iterations = 10;  // T: training iterations after the seed round
  int batch = 100;      // N: documents requested per iteration
  SvmConfig svm;
  Subprotocol subprotocol = Subprotocol::RevealAll;
  LabelReportConfig label_cfg;
  ClassifierReportConfig classifier_cfg;
  // emulate a productive seed query by forcing one known positive into the seed
  bool force_seed_positive = false;
};

struct TrainResult {
  LinearModel model;
  bool single_class = false;  // degenerate mean-direction model was used
  std::vector<double> epoch_objectives;  // non-increasing, tolerance 1e-9
};

struct CalIterationRecord {
  int iteration = 0;
  std::vector<DocId> requested;  // batch handed to the subprotocol
  double recall = 0.0;           // cumulative, over full-corpus truth
  long cumulative_nrd = 0;
  bool full_reveal = false;
  ProtocolOutcome outcome;
};

struct CalRunRecord {
  std::vector<CalIterationRecord> iterations;
  std::vector<DocId> revealed;     // cumulative union, insertion order
  std::map<DocId, Label> train_labels;  // S
  bool truncated = false;          // corpus exhausted before T iterations
};

struct CalParties {
  AliceStrategy alice;
  BobOracle bob;
  CourtOracle court;
};

// Full-batch subgradient descent with a backtracking halving step so the
// objective never increases across epochs. Zero initialization.
TrainResult train_linear_svm(const std::vector<std::pair<la::Vec, Label>>& labeled,
                             const SvmConfig& cfg);

// Ranking score: projection onto the normal vector; bias excluded.
double score(const LinearModel& model, const la::Vec& x);

// Up to n highest-score documents outside `excluded`, as a OneDimInstance
// whose positions are the scores and labels the corpus truth. Score ties
// break by ascending id.
OneDimInstance select_top_n(const Instance& corpus, const std::set<DocId>& excluded,
                            const LinearModel& model, int n);

// Continuous active learning: random seed batch, then train/score/select/
// verify rounds, with the configured subprotocol standing in for manual
// review. Sub-round generators are derived from `seed` so equal seeds give
// identical batch selections across subprotocol choices.
CalRunRecord run_cal(const Instance& corpus, const CalConfig& cfg, const CalParties& parties,
                     uint64_t seed);

}  // namespace edisc
