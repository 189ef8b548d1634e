#include "edisc/protocols_1d.hpp"

#include <cmath>
#include <stdexcept>

namespace edisc {

double sampling_constant_label(long err_report, int k, double delta) {
  if (k < 1) throw std::invalid_argument("error tolerance k must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0,1)");
  if (err_report < 0) throw std::invalid_argument("negative error count");
  return (2.0 + 2.0 * static_cast<double>(err_report) / k) * std::log(1.0 / delta);
}

double sampling_constant_classifier(int n, double delta) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0,1)");
  return 2.0 * std::log(n / delta);
}

namespace {

// Shared run state for one protocol execution over a sub-instance.
struct RunState {
  const OneDimInstance& inst;
  const BobOracle& bob;
  const CourtOracle& court;
  Rng& rng;
  ProtocolOutcome out;
  std::vector<char> revealed;
  std::vector<char> bob_checked;
  std::vector<Label> court_label;  // 0 = not settled

  RunState(const OneDimInstance& i, const BobOracle& b, const CourtOracle& c, Rng& r)
      : inst(i), bob(b), court(c), rng(r),
        revealed(i.n(), 0), bob_checked(i.n(), 0), court_label(i.n(), 0) {}

  void reveal(int i) {
    if (revealed[i]) return;
    revealed[i] = 1;
    out.revealed.push_back(inst.ids[i]);
    out.transcript.push_back({EventType::Revealed, inst.ids[i]});
  }

  // Bob labels document i and any disagreement with alice_label goes to
  // court. Returns the label that now stands for this document.
  Label verify(int i, Label alice_label) {
    bob_checked[i] = 1;
    Label bl = bob.label(inst.labels[i], rng);
    if (bl == alice_label) return alice_label;
    Label decision = court.settle(inst.labels[i]);
    court_label[i] = decision;
    out.court_settled[inst.ids[i]] = decision;
    out.transcript.push_back({EventType::SentToCourt, inst.ids[i], 0.0, decision});
    return decision;
  }
};

}  // namespace

ProtocolOutcome run_label_report(const OneDimInstance& inst, const LabelReport& report,
                                 const BobOracle& bob, const CourtOracle& court,
                                 const LabelReportConfig& cfg, Rng& rng) {
  if (inst.n() == 0) throw std::invalid_argument("empty instance");
  if (static_cast<int>(report.labels.size()) != inst.n())
    throw std::invalid_argument("report must cover all documents");

  RunState st(inst, bob, court, rng);
  st.out.transcript.push_back({EventType::ReportReceived});

  auto [t_report, err_report] = optimal_threshold_report(inst, report.labels);
  const double c = sampling_constant_label(err_report, cfg.k, cfg.delta);

  auto full_reveal = [&](FullRevealReason reason) {
    st.out.full_reveal_triggered = true;
    st.out.transcript.push_back({EventType::FullReveal, 0, 0.0, 0, reason});
    for (int i = 0; i < inst.n(); ++i) {
      st.reveal(i);
      if (!st.court_label[i] && !st.bob_checked[i]) st.verify(i, report.labels[i]);
    }
  };

  // Every Alice-positive and everything at or above t*_A goes to Bob. The
  // document exactly at t*_A is included: sign(0) = +1 puts it on the
  // positive side of the report-optimal classifier.
  bool done = false;
  for (int i = 0; i < inst.n() && !done; ++i) {
    if (report.labels[i] == 1 || inst.positions[i] >= t_report) {
      st.reveal(i);
      Label settled = st.verify(i, report.labels[i]);
      if (settled == 1 && report.labels[i] == -1) {
        full_reveal(FullRevealReason::HiddenPositiveConfirmed);
        done = true;
      }
    }
  }

  // One-pass sampling walk over the Alice-negatives below t*_A; a skipped
  // document is never revisited.
  if (!done) {
    long walk_rank = 0;
    for (int i = 0; i < inst.n() && !done; ++i) {
      if (report.labels[i] != -1 || inst.positions[i] >= t_report) continue;
      ++walk_rank;
      double p = std::min(1.0, c / static_cast<double>(walk_rank));
      double u = rng.uniform();  // exactly one variate per walk step
      if (u >= p) continue;
      st.out.transcript.push_back({EventType::Sampled, inst.ids[i], p});
      st.reveal(i);
      Label settled = st.verify(i, -1);
      if (settled == 1) {
        full_reveal(FullRevealReason::HiddenPositiveConfirmed);
        done = true;
      }
    }
  }

  for (int i = 0; i < inst.n(); ++i)
    st.out.output_labels[inst.ids[i]] = st.court_label[i] ? st.court_label[i] : report.labels[i];
  st.out.transcript.push_back({EventType::Stopped});
  return std::move(st.out);
}

ProtocolOutcome run_label_report(const OneDimInstance& inst, const AliceStrategy& alice,
                                 const BobOracle& bob, const CourtOracle& court,
                                 const LabelReportConfig& cfg, Rng& rng) {
  return run_label_report(inst, make_label_report(inst, alice), bob, court, cfg, rng);
}

ProtocolOutcome run_classifier_report(const OneDimInstance& inst, const ClassifierReport& report,
                                      const BobOracle& bob, const CourtOracle& court,
                                      const ClassifierReportConfig& cfg, Rng& rng) {
  if (inst.n() == 0) throw std::invalid_argument("empty instance");
  if (static_cast<int>(report.labels.size()) != inst.n())
    throw std::invalid_argument("report labels must be aligned with the instance");

  RunState st(inst, bob, court, rng);
  st.out.transcript.push_back({EventType::ReportReceived});

  const double t_alice = report.threshold;
  auto alice_label = [&](int i) {
    return inst.positions[i] >= t_alice ? report.labels[i] : -1;
  };

  // Everything in [t_A, +inf) is revealed and checked.
  for (int i = 0; i < inst.n(); ++i) {
    if (inst.positions[i] < t_alice) continue;
    st.reveal(i);
    st.verify(i, report.labels[i]);
  }

  // Epoch walk below t_A. Unsampled and Bob-negative documents grow the
  // weight; a court-confirmed positive resets it.
  const double c = sampling_constant_classifier(inst.n(), cfg.delta);
  long m_plus = 0, m_minus = 0, weight = 1;
  for (int i = 0; i < inst.n(); ++i) {
    if (inst.positions[i] >= t_alice) continue;
    double p = std::min(1.0, c / static_cast<double>(weight));
    double u = rng.uniform();
    if (u < p) {
      st.out.transcript.push_back({EventType::Sampled, inst.ids[i], p});
      st.reveal(i);
      Label settled = st.verify(i, -1);
      if (settled == 1) {
        ++m_plus;
        weight = 1;
        st.out.transcript.push_back({EventType::EpochReset, inst.ids[i]});
      } else {
        // Bob-negative, or the court ruled for Alice under a noisy Bob
        ++m_minus;
        ++weight;
      }
    } else {
      ++m_minus;
      ++weight;
    }
    if (m_plus > m_minus) {
      st.out.full_reveal_triggered = true;
      st.out.transcript.push_back({EventType::FullReveal, 0, 0.0, 0,
                                   FullRevealReason::ClassifierRejected});
      for (int j = 0; j < inst.n(); ++j) {
        if (inst.positions[j] >= t_alice) continue;
        st.reveal(j);
        if (!st.court_label[j] && !st.bob_checked[j]) st.verify(j, -1);
      }
      break;
    }
  }

  for (int i = 0; i < inst.n(); ++i)
    st.out.output_labels[inst.ids[i]] = st.court_label[i] ? st.court_label[i] : alice_label(i);
  st.out.transcript.push_back({EventType::Stopped});
  return std::move(st.out);
}

ProtocolOutcome run_classifier_report(const OneDimInstance& inst, const AliceStrategy& alice,
                                      const BobOracle& bob, const CourtOracle& court,
                                      const ClassifierReportConfig& cfg, Rng& rng) {
  return run_classifier_report(inst, make_classifier_report(inst, alice), bob, court, cfg, rng);
}

ProtocolOutcome run_reveal_all(const OneDimInstance& inst, const BobOracle& bob, Rng& rng) {
  ProtocolOutcome out;
  if (inst.n() == 0) return out;
  for (int i = 0; i < inst.n(); ++i) {
    out.revealed.push_back(inst.ids[i]);
    out.transcript.push_back({EventType::Revealed, inst.ids[i]});
    out.output_labels[inst.ids[i]] = bob.label(inst.labels[i], rng);
  }
  out.transcript.push_back({EventType::Stopped});
  return out;
}

}  // namespace edisc
