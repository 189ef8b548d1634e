#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "edisc/cal_engine.hpp"
#include "edisc/datagen.hpp"

using namespace edisc;

namespace {

std::vector<std::pair<la::Vec, Label>> separable_toy() {
  std::vector<std::pair<la::Vec, Label>> out;
  out.push_back({{2.0, 0.3}, 1});
  out.push_back({{1.5, -0.4}, 1});
  out.push_back({{2.5, 1.0}, 1});
  out.push_back({{-2.0, 0.2}, -1});
  out.push_back({{-1.2, -0.8}, -1});
  out.push_back({{-2.7, 0.9}, -1});
  return out;
}

long training_error(const LinearModel& m, const std::vector<std::pair<la::Vec, Label>>& data) {
  long err = 0;
  for (const auto& [x, y] : data) err += classify(m, x) != y;
  return err;
}

}  // namespace

TEST_CASE("svm reaches zero training error on a separable toy set") {
  auto data = separable_toy();
  auto res = train_linear_svm(data, {});
  CHECK_FALSE(res.single_class);
  CHECK(training_error(res.model, data) == 0);
}

TEST_CASE("epoch objectives never increase") {
  GaussianConfig cfg;
  cfg.n = 120;
  cfg.d = 4;
  cfg.positive_ratio = 0.3;
  cfg.seed = 6;
  auto inst = gaussian_mixture(cfg);
  std::vector<std::pair<la::Vec, Label>> data;
  for (int i = 0; i < inst.n(); ++i) data.push_back({inst.documents[i].features, inst.truth[i]});
  auto res = train_linear_svm(data, {});
  REQUIRE(res.epoch_objectives.size() >= 2);
  for (size_t i = 1; i < res.epoch_objectives.size(); ++i)
    CHECK(res.epoch_objectives[i] <= res.epoch_objectives[i - 1] + 1e-9);
}

TEST_CASE("duplicating the data leaves the trained model unchanged") {
  auto data = separable_toy();
  auto once = train_linear_svm(data, {});
  auto doubled = data;
  doubled.insert(doubled.end(), data.begin(), data.end());
  auto twice = train_linear_svm(doubled, {});
  for (size_t j = 0; j < once.model.w.size(); ++j)
    CHECK(once.model.w[j] == doctest::Approx(twice.model.w[j]).epsilon(1e-9));
  CHECK(once.model.b == doctest::Approx(twice.model.b).epsilon(1e-9));
}

TEST_CASE("flipping all labels negates the model") {
  auto data = separable_toy();
  auto pos = train_linear_svm(data, {});
  for (auto& [x, y] : data) y = -y;
  auto neg = train_linear_svm(data, {});
  for (size_t j = 0; j < pos.model.w.size(); ++j)
    CHECK(neg.model.w[j] == doctest::Approx(-pos.model.w[j]).epsilon(1e-7));
  CHECK(neg.model.b == doctest::Approx(-pos.model.b).epsilon(1e-7));
}

TEST_CASE("single-class input yields a model classifying everything that class") {
  std::vector<std::pair<la::Vec, Label>> pos_only = {{{1.0, 2.0}, 1}, {{-0.5, 0.3}, 1}};
  auto res = train_linear_svm(pos_only, {});
  CHECK(res.single_class);
  for (const auto& [x, y] : pos_only) CHECK(classify(res.model, x) == 1);

  std::vector<std::pair<la::Vec, Label>> neg_only = {{{1.0, 2.0}, -1}, {{-0.5, 0.3}, -1}};
  auto res2 = train_linear_svm(neg_only, {});
  CHECK(res2.single_class);
  for (const auto& [x, y] : neg_only) CHECK(classify(res2.model, x) == -1);
}

TEST_CASE("train_linear_svm rejects empty input") {
  CHECK_THROWS(train_linear_svm({}, {}));
}

TEST_CASE("select_top_n agrees with a sort oracle and breaks ties by id") {
  GaussianConfig cfg;
  cfg.n = 80;
  cfg.d = 3;
  cfg.positive_ratio = 0.2;
  cfg.seed = 14;
  auto corpus = gaussian_mixture(cfg);
  LinearModel m{{0.5, -1.0, 0.25}, 0.7};
  std::set<DocId> excluded = {0, 5, 17};
  auto sel = select_top_n(corpus, excluded, m, 12);
  REQUIRE(sel.n() == 12);

  // oracle: full sort by (score desc, id asc)
  std::vector<std::pair<double, DocId>> ranked;
  for (int i = 0; i < corpus.n(); ++i) {
    if (excluded.count(corpus.documents[i].id)) continue;
    ranked.push_back({score(m, corpus.documents[i].features), corpus.documents[i].id});
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::set<DocId> expect;
  for (int i = 0; i < 12; ++i) expect.insert(ranked[i].second);
  std::set<DocId> got(sel.ids.begin(), sel.ids.end());
  CHECK(got == expect);
  for (DocId id : excluded) CHECK(got.count(id) == 0);
  // positions are the scores, labels the truth
  for (int i = 0; i < sel.n(); ++i) {
    int idx = corpus.index_of(sel.ids[i]);
    CHECK(sel.positions[i] == doctest::Approx(score(m, corpus.documents[idx].features)));
    CHECK(sel.labels[i] == corpus.truth[idx]);
  }
}

TEST_CASE("select_top_n tie-break: equal scores ordered by ascending id") {
  Instance corpus;
  corpus.dim = 1;
  corpus.documents = {{9, {1.0}}, {3, {1.0}}, {5, {1.0}}, {1, {0.0}}};
  corpus.truth = {1, -1, 1, -1};
  LinearModel m{{1.0}, 0.0};
  auto sel = select_top_n(corpus, {}, m, 2);
  std::set<DocId> got(sel.ids.begin(), sel.ids.end());
  CHECK(got == std::set<DocId>{3, 5});
}

TEST_CASE("cal with truthful label report trains on the same set as reveal_all") {
  GaussianConfig gcfg;
  gcfg.n = 400;
  gcfg.d = 5;
  gcfg.positive_ratio = 0.1;
  gcfg.seed = 3;
  auto corpus = gaussian_mixture(gcfg);

  CalConfig cfg;
  cfg.iterations = 4;
  cfg.batch = 40;
  cfg.subprotocol = Subprotocol::RevealAll;
  CalParties parties;
  parties.alice = AliceStrategy::truthful();
  auto reveal = run_cal(corpus, cfg, parties, 99);

  cfg.subprotocol = Subprotocol::LabelReport;
  cfg.label_cfg = {1, 0.1};
  auto label = run_cal(corpus, cfg, parties, 99);

  // a truthful label report labels its whole batch (sampled or not), so the
  // training set S and therefore the whole trajectory coincide; only the
  // revealed subset shrinks to the sampled documents
  CHECK(label.train_labels == reveal.train_labels);
  std::set<DocId> label_rev(label.revealed.begin(), label.revealed.end());
  std::set<DocId> reveal_rev(reveal.revealed.begin(), reveal.revealed.end());
  CHECK(label_rev.size() <= reveal_rev.size());
  for (DocId id : label_rev) CHECK(reveal_rev.count(id) == 1);
  for (size_t t = 0; t < reveal.iterations.size(); ++t)
    CHECK(label.iterations[t].requested == reveal.iterations[t].requested);
}

TEST_CASE("cal runs are deterministic in the seed") {
  GaussianConfig gcfg;
  gcfg.n = 300;
  gcfg.d = 4;
  gcfg.positive_ratio = 0.1;
  gcfg.seed = 5;
  auto corpus = gaussian_mixture(gcfg);
  CalConfig cfg;
  cfg.iterations = 3;
  cfg.batch = 30;
  cfg.subprotocol = Subprotocol::ClassifierReport;
  cfg.classifier_cfg = {0.1};
  CalParties parties;
  parties.alice = AliceStrategy::truthful();
  auto a = run_cal(corpus, cfg, parties, 42);
  auto b = run_cal(corpus, cfg, parties, 42);
  CHECK(a.revealed == b.revealed);
  CHECK(a.train_labels == b.train_labels);
  auto c = run_cal(corpus, cfg, parties, 43);
  CHECK(a.revealed != c.revealed);
}

TEST_CASE("recall and cumulative nrd are monotone across iterations") {
  GaussianConfig gcfg;
  gcfg.n = 500;
  gcfg.d = 6;
  gcfg.positive_ratio = 0.08;
  gcfg.seed = 9;
  auto corpus = gaussian_mixture(gcfg);
  CalConfig cfg;
  cfg.iterations = 5;
  cfg.batch = 50;
  cfg.subprotocol = Subprotocol::LabelReport;
  cfg.label_cfg = {1, 0.1};
  CalParties parties;
  parties.alice = AliceStrategy::truthful();
  auto rec = run_cal(corpus, cfg, parties, 7);
  REQUIRE(rec.iterations.size() >= 2);
  for (size_t t = 1; t < rec.iterations.size(); ++t) {
    CHECK(rec.iterations[t].recall >= rec.iterations[t - 1].recall);
    CHECK(rec.iterations[t].cumulative_nrd >= rec.iterations[t - 1].cumulative_nrd);
  }
  // revealed ids are unique
  std::set<DocId> uniq(rec.revealed.begin(), rec.revealed.end());
  CHECK(uniq.size() == rec.revealed.size());
}

TEST_CASE("force_seed_positive guarantees a responsive seed document") {
  // tiny positive ratio so a random 10-batch usually misses every positive
  GaussianConfig gcfg;
  gcfg.n = 1000;
  gcfg.d = 2;
  gcfg.positive_ratio = 0.002;  // 2 positives
  gcfg.seed = 11;
  auto corpus = gaussian_mixture(gcfg);
  CalConfig cfg;
  cfg.iterations = 1;
  cfg.batch = 10;
  cfg.force_seed_positive = true;
  CalParties parties;
  parties.alice = AliceStrategy::truthful();
  for (uint64_t s = 0; s < 5; ++s) {
    auto rec = run_cal(corpus, cfg, parties, s);
    bool has_pos = false;
    for (DocId id : rec.iterations[0].requested) has_pos = has_pos || corpus.truth_of(id) == 1;
    CHECK(has_pos);
  }
}

TEST_CASE("small corpus truncates instead of looping") {
  GaussianConfig gcfg;
  gcfg.n = 50;
  gcfg.d = 2;
  gcfg.positive_ratio = 0.2;
  gcfg.seed = 2;
  auto corpus = gaussian_mixture(gcfg);
  CalConfig cfg;
  cfg.iterations = 10;
  cfg.batch = 20;
  CalParties parties;
  parties.alice = AliceStrategy::truthful();
  auto rec = run_cal(corpus, cfg, parties, 1);
  CHECK(rec.truncated);
  CHECK(rec.revealed.size() <= 50);
}

TEST_CASE("run_cal validates its configuration") {
  Instance corpus;
  corpus.dim = 1;
  CalParties parties;
  CHECK_THROWS(run_cal(corpus, {}, parties, 0));
  corpus.documents = {{1, {0.0}}};
  corpus.truth = {1};
  CalConfig bad;
  bad.iterations = 0;
  CHECK_THROWS(run_cal(corpus, bad, parties, 0));
  bad.iterations = 1;
  bad.batch = 0;
  CHECK_THROWS(run_cal(corpus, bad, parties, 0));
}
