#pragma once

#include <cstdint>

#include "edisc/core_model.hpp"
#include "edisc/parties.hpp"
#include "edisc/rng.hpp"

namespace edisc {

struct LabelReportConfig {
  int k = 1;           // error tolerance, >= 1
  double delta = 0.1;  // failure probability in (0,1)
};

struct ClassifierReportConfig {
  double delta = 0.1;
};

// c = (2 + 2 err_A / k) ln(1/delta)
double sampling_constant_label(long err_report, int k, double delta);

// c = 2 ln(N / delta)
double sampling_constant_classifier(int n, double delta);

// Label-report verification: Alice reports every label, Trent reveals all
// Alice-positives and everything at or above the report-optimal threshold,
// then samples the remaining negatives with p_i = min{1, c/i}. A
// court-confirmed hidden positive triggers a full reveal.
ProtocolOutcome run_label_report(const OneDimInstance& inst, const LabelReport& report,
                                 const BobOracle& bob, const CourtOracle& court,
                                 const LabelReportConfig& cfg, Rng& rng);
ProtocolOutcome run_label_report(const OneDimInstance& inst, const AliceStrategy& alice,
                                 const BobOracle& bob, const CourtOracle& court,
                                 const LabelReportConfig& cfg, Rng& rng);

// Classifier-report verification: Alice reports a threshold and labels above
// it; Trent walks the region below with epoch weights, p = min{1, c/W}, and
// reveals everything below the threshold once M+ > M-.
ProtocolOutcome run_classifier_report(const OneDimInstance& inst, const ClassifierReport& report,
                                      const BobOracle& bob, const CourtOracle& court,
                                      const ClassifierReportConfig& cfg, Rng& rng);
ProtocolOutcome run_classifier_report(const OneDimInstance& inst, const AliceStrategy& alice,
                                      const BobOracle& bob, const CourtOracle& court,
                                      const ClassifierReportConfig& cfg, Rng& rng);

// Baseline: reveal everything to Bob; output is Bob's labeling.
ProtocolOutcome run_reveal_all(const OneDimInstance& inst, const BobOracle& bob, Rng& rng);

}  // namespace edisc
