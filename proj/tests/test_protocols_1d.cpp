#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "edisc/protocols_1d.hpp"

using namespace edisc;

namespace {

OneDimInstance ladder(int n, int n_pos) {
  // positions n..1, the top n_pos responsive
  std::vector<DocId> ids(n);
  std::vector<double> pos(n);
  std::vector<Label> lab(n);
  for (int i = 0; i < n; ++i) {
    ids[i] = i + 1;
    pos[i] = n - i;
    lab[i] = i < n_pos ? 1 : -1;
  }
  return make_one_dim_instance(ids, pos, lab);
}

}  // namespace

TEST_CASE("sampling constants match their formulas") {
  CHECK(sampling_constant_label(0, 1, 0.1) == doctest::Approx(2.0 * std::log(10.0)));
  CHECK(sampling_constant_label(3, 1, 0.1) == doctest::Approx(8.0 * std::log(10.0)));
  CHECK(sampling_constant_label(3, 3, 0.5) == doctest::Approx(4.0 * std::log(2.0)));
  CHECK(sampling_constant_classifier(100, 0.01) == doctest::Approx(2.0 * std::log(10000.0)));
  CHECK_THROWS(sampling_constant_label(0, 0, 0.1));
  CHECK_THROWS(sampling_constant_label(-1, 1, 0.1));
  CHECK_THROWS(sampling_constant_label(0, 1, 0.0));
  CHECK_THROWS(sampling_constant_classifier(0, 0.1));
}

TEST_CASE("truthful label report: full recall, no court, no full reveal") {
  auto inst = ladder(40, 8);
  BobOracle bob;
  CourtOracle court;
  for (uint64_t s = 0; s < 20; ++s) {
    Rng rng(s);
    auto out = run_label_report(inst, AliceStrategy::truthful(), bob, court, {1, 0.1}, rng);
    CHECK(recall(out, inst) == doctest::Approx(1.0));
    CHECK(out.court_settled.empty());
    CHECK_FALSE(out.full_reveal_triggered);
    // output labels equal truth
    for (int i = 0; i < inst.n(); ++i) CHECK(out.output_labels.at(inst.ids[i]) == inst.labels[i]);
  }
}

TEST_CASE("label report reveals the report-positive region before walking") {
  auto inst = ladder(30, 5);
  BobOracle bob;
  CourtOracle court;
  Rng rng(2);
  auto out = run_label_report(inst, AliceStrategy::truthful(), bob, court, {1, 0.1}, rng);
  // documents 1..5 (report positives at and above t*_A) come first in order
  REQUIRE(out.revealed.size() >= 5);
  for (int i = 0; i < 5; ++i) CHECK(out.revealed[i] == i + 1);
}

TEST_CASE("hidden positive at walk rank 1 is caught deterministically") {
  // err_A(t*_A) >= 0 gives c >= 2 ln(1/delta) > 1, so p_1 = 1: the first
  // walked document is always sampled; hiding the top below-threshold
  // positive is certain detection
  auto inst = ladder(20, 6);
  std::map<DocId, Label> script;
  for (int i = 0; i < inst.n(); ++i) script[inst.ids[i]] = inst.labels[i];
  script[6] = -1;  // hide the lowest positive; report optimum moves above it
  BobOracle bob;
  CourtOracle court;
  for (uint64_t s = 0; s < 30; ++s) {
    Rng rng(s);
    auto out =
        run_label_report(inst, AliceStrategy::scripted(script), bob, court, {1, 0.1}, rng);
    CHECK(out.full_reveal_triggered);
    CHECK(recall(out, inst) == doctest::Approx(1.0));
    CHECK(out.court_settled.at(6) == 1);
    // the full reveal disclosed everything
    CHECK(out.revealed.size() == static_cast<size_t>(inst.n()));
  }
}

TEST_CASE("transcripts replay bit-for-bit from the seed") {
  auto inst = ladder(50, 10);
  BobOracle bob;
  CourtOracle court;
  Rng r1(77), r2(77), r3(78);
  auto a = run_label_report(inst, AliceStrategy::truthful(), bob, court, {1, 0.3}, r1);
  auto b = run_label_report(inst, AliceStrategy::truthful(), bob, court, {1, 0.3}, r2);
  auto c = run_label_report(inst, AliceStrategy::truthful(), bob, court, {1, 0.3}, r3);
  CHECK(a.transcript == b.transcript);
  CHECK(a.revealed == b.revealed);
  bool differs = a.transcript != c.transcript || a.revealed != c.revealed;
  CHECK(differs);  // delta=0.3 leaves the tail walk genuinely random
}

TEST_CASE("walk probabilities are min(1, c/i) in walk order") {
  auto inst = ladder(60, 4);
  BobOracle bob;
  CourtOracle court;
  Rng rng(5);
  double delta = 0.2;
  auto out = run_label_report(inst, AliceStrategy::truthful(), bob, court, {1, delta}, rng);
  double c = sampling_constant_label(0, 1, delta);
  // recover each sampled document's walk rank from its id: ids 5..60 are the
  // negatives below the threshold, walked top-down
  for (const auto& ev : out.transcript) {
    if (ev.type != EventType::Sampled) continue;
    long rank = ev.id - 4;
    CHECK(ev.probability == doctest::Approx(std::min(1.0, c / rank)));
  }
}

TEST_CASE("classifier report: truthful threshold reveals [t_A, inf) and walks below") {
  auto inst = ladder(40, 10);
  BobOracle bob;
  CourtOracle court;
  Rng rng(3);
  double t_star = inst.positions[9];
  auto out = run_classifier_report(inst, AliceStrategy::report_threshold(t_star), bob, court,
                                   {0.1}, rng);
  CHECK_FALSE(out.full_reveal_triggered);
  CHECK(recall(out, inst) == doctest::Approx(1.0));
  std::set<DocId> revealed(out.revealed.begin(), out.revealed.end());
  for (int i = 0; i < 10; ++i) CHECK(revealed.count(i + 1) == 1);
  // below threshold, only sampled documents are revealed
  long sampled = 0;
  for (const auto& ev : out.transcript)
    if (ev.type == EventType::Sampled) ++sampled;
  CHECK(static_cast<long>(out.revealed.size()) == 10 + sampled);
}

TEST_CASE("classifier report: hiding a positive block forces the full reveal") {
  // 10 honest positives, then 10 hidden positives right below t_A: the first
  // five walked documents are sampled with p=1 and confirmed responsive, so
  // m+ > m- after the first one
  auto inst = ladder(52, 20);
  double t_a = inst.positions[9];
  BobOracle bob;
  CourtOracle court;
  for (uint64_t s = 0; s < 30; ++s) {
    Rng rng(s);
    auto out =
        run_classifier_report(inst, AliceStrategy::report_threshold(t_a), bob, court, {0.1}, rng);
    CHECK(out.full_reveal_triggered);
    CHECK(recall(out, inst) == doctest::Approx(1.0));
  }
}

TEST_CASE("epoch reset events follow court-confirmed positives") {
  auto inst = ladder(52, 20);
  double t_a = inst.positions[9];
  BobOracle bob;
  CourtOracle court;
  Rng rng(1);
  auto out =
      run_classifier_report(inst, AliceStrategy::report_threshold(t_a), bob, court, {0.1}, rng);
  long resets = 0, confirmed = 0;
  for (const auto& ev : out.transcript) {
    if (ev.type == EventType::EpochReset) ++resets;
    if (ev.type == EventType::SentToCourt && ev.decision == 1) ++confirmed;
  }
  CHECK(resets >= 1);
  CHECK(resets <= confirmed);  // every reset is backed by a confirmed positive
}

TEST_CASE("reveal_all reveals everything and outputs Bob labels") {
  auto inst = ladder(15, 3);
  BobOracle bob;
  Rng rng(4);
  auto out = run_reveal_all(inst, bob, rng);
  CHECK(out.revealed.size() == 15);
  CHECK(recall(out, inst) == doctest::Approx(1.0));
  CHECK(nrd(out, inst) == 12);
  for (int i = 0; i < inst.n(); ++i) CHECK(out.output_labels.at(inst.ids[i]) == inst.labels[i]);
}

TEST_CASE("protocol rejects malformed inputs") {
  auto inst = ladder(10, 2);
  BobOracle bob;
  CourtOracle court;
  Rng rng(0);
  LabelReport bad;
  bad.labels = {1, -1};  // wrong length
  CHECK_THROWS(run_label_report(inst, bad, bob, court, {1, 0.1}, rng));
  OneDimInstance empty;
  CHECK_THROWS(run_label_report(empty, AliceStrategy::truthful(), bob, court, {1, 0.1}, rng));
}

TEST_CASE("revealed ids are unique") {
  auto inst = ladder(30, 6);
  BobOracle bob;
  CourtOracle court;
  for (uint64_t s = 0; s < 10; ++s) {
    Rng rng(1000 + s);
    auto out = run_label_report(inst, AliceStrategy::hide_near_threshold(1), bob, court,
                                {1, 0.1}, rng);
    std::set<DocId> uniq(out.revealed.begin(), out.revealed.end());
    CHECK(uniq.size() == out.revealed.size());
  }
}
