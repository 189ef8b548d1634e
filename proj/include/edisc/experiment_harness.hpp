#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "edisc/core_model.hpp"
#include "edisc/parties.hpp"

namespace edisc {

// One (trial, iteration) observation; the unit of the CSV contract.
struct ResultRow {
  std::string experiment;
  std::string protocol;
  int iteration = 0;
  uint64_t seed = 0;
  double recall = 0.0;
  long nrd = 0;
  bool full_reveal = false;
  double ms = 0.0;  // stays 0 unless timing is enabled (keeps reruns byte-equal)
};

// %.6g float formatting shared by every emitter.
std::string format_g6(double v);

// Sorted, schema-stable emission: header
// experiment,protocol,iteration,seed,recall,nrd,full_reveal,ms
std::string to_csv(std::vector<ResultRow> rows);
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

struct VerdictRow {
  std::string claim;
  double empirical = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // Monte Carlo allowance added to the bound
  bool pass = false;
  bool skipped = false;
  std::string note;
};

struct CampaignReport {
  std::string campaign;
  std::vector<VerdictRow> rows;
  bool all_pass() const;  // skipped rows neither pass nor fail
};

std::string to_text(const CampaignReport& report);

struct HarnessConfig {
  uint64_t seed = 0;
  int trials = 10000;
  double delta = 0.1;
  int k = 1;
  bool timing = false;
};

// 1-D grid member: N=200 positions, 20 responsive documents, fp false
// positives interleaved above the optimal threshold and fn true positives
// scattered deep below it, so err* = fp + fn by construction.
OneDimInstance bound_grid_instance(int fp, int fn, uint64_t seed);

// Hand-built detection instances where the dishonest report satisfies the
// detection lemma's hypotheses (all sampling probabilities < 1 in the label
// setting; early deterministic majority flip in the classifier setting).
OneDimInstance detection_instance_label();
std::map<DocId, Label> detection_report_label();
OneDimInstance detection_instance_classifier();
double detection_threshold_classifier();

// Monte Carlo verification of one theorem claim family. Campaigns:
// thm1-recall, thm1-nrd, lem1-detect, thm3-detect, thm3-nrd.
CampaignReport verify_bounds(const std::string& campaign, const HarnessConfig& cfg);
std::vector<CampaignReport> verify_all_bounds(const HarnessConfig& cfg);

struct FigureConfig {
  int repeats = 10;
  uint64_t seed = 0;
  int corpus_n = 5000;
  int corpus_d = 20;
  double positive_ratio = 0.05;
  double mean_separation = 2.0;
  int iterations = 10;  // T
  int batch = 100;      // N per iteration
  double delta = 0.01;
  int k = 1;
  int fig4_n = 400;  // smaller matched realizable corpus for the crit ratio
  int fig4_d = 8;    // at higher dimension every negative is hull-extreme and
                     // the critical-points ratio saturates toward 1
  bool timing = false;
};

// fig1/fig2: per-iteration recall and NRD series for reveal_all,
// protocol_label, protocol_classifier over `repeats` seeded runs (fig3 is the
// same series; the figures differ only in which column is plotted).
// fig4: non-responsive disclosure ratio of the critical-points reveal vs the
// classifier-report protocol on matched realizable data.
std::vector<ResultRow> run_figure_campaign(const std::string& name, const FigureConfig& cfg);

// Flat key=value config files; '#' starts a comment. CLI flags override.
std::map<std::string, std::string> load_config_file(const std::string& path);

}  // namespace edisc
