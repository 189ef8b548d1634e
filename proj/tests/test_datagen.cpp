#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "edisc/critical_points.hpp"
#include "edisc/datagen.hpp"

using namespace edisc;

TEST_CASE("gaussian mixture: counts, dimension, determinism") {
  GaussianConfig cfg;
  cfg.n = 500;
  cfg.d = 3;
  cfg.positive_ratio = 0.1;
  cfg.seed = 12;
  auto a = gaussian_mixture(cfg);
  CHECK(a.n() == 500);
  CHECK(a.dim == 3);
  long np = 0;
  for (auto l : a.truth) np += l == 1;
  CHECK(np == 50);
  auto b = gaussian_mixture(cfg);
  for (int i = 0; i < a.n(); ++i) CHECK(a.documents[i].features == b.documents[i].features);
  cfg.seed = 13;
  auto c = gaussian_mixture(cfg);
  CHECK(a.documents[0].features != c.documents[0].features);
}

TEST_CASE("gaussian mixture: class means separate along the first axis") {
  GaussianConfig cfg;
  cfg.n = 8000;
  cfg.d = 2;
  cfg.positive_ratio = 0.5;
  cfg.mean_separation = 3.0;
  cfg.seed = 4;
  auto inst = gaussian_mixture(cfg);
  double mp = 0, mm = 0, mp1 = 0, mm1 = 0;
  long np = 0, nm = 0;
  for (int i = 0; i < inst.n(); ++i) {
    if (inst.truth[i] == 1) {
      ++np;
      mp += inst.documents[i].features[0];
      mp1 += inst.documents[i].features[1];
    } else {
      ++nm;
      mm += inst.documents[i].features[0];
      mm1 += inst.documents[i].features[1];
    }
  }
  mp /= np; mm /= nm; mp1 /= np; mm1 /= nm;
  // sample mean of N(mu, 1) over 4000 draws: tolerance 4 sigma / sqrt(n)
  double tol = 4.0 / std::sqrt(4000.0);
  CHECK(std::abs(mp - 1.5) < tol);
  CHECK(std::abs(mm + 1.5) < tol);
  CHECK(std::abs(mp1) < tol);
  CHECK(std::abs(mm1) < tol);
}

TEST_CASE("gaussian mixture rejects bad parameters") {
  GaussianConfig cfg;
  cfg.n = 0;
  CHECK_THROWS(gaussian_mixture(cfg));
  cfg.n = 100;
  cfg.positive_ratio = 0.0;
  CHECK_THROWS(gaussian_mixture(cfg));
  cfg.positive_ratio = 0.001;  // rounds to zero positives
  CHECK_THROWS(gaussian_mixture(cfg));
}

TEST_CASE("enforce_realizable produces a separable instance") {
  GaussianConfig cfg;
  cfg.n = 300;
  cfg.d = 4;
  cfg.positive_ratio = 0.2;
  cfg.mean_separation = 1.0;  // lots of overlap before the fix
  cfg.seed = 21;
  auto raw = gaussian_mixture(cfg);
  auto fixed = enforce_realizable(raw, 1e-3);
  std::vector<la::Vec> xp, xm;
  for (int i = 0; i < fixed.n(); ++i)
    (fixed.truth[i] == 1 ? xp : xm).push_back(fixed.documents[i].features);
  CHECK(linearly_separable(xp, xm));
  CHECK(fixed.truth == raw.truth);
}

TEST_CASE("enforce_realizable moves only misclassified points") {
  GaussianConfig cfg;
  cfg.n = 200;
  cfg.d = 3;
  cfg.positive_ratio = 0.25;
  cfg.mean_separation = 1.5;
  cfg.seed = 8;
  auto raw = gaussian_mixture(cfg);

  // recompute the bisector the same way to identify who should move
  int d = raw.dim;
  la::Vec mp(d, 0.0), mm(d, 0.0);
  long np = 0, nm = 0;
  for (int i = 0; i < raw.n(); ++i) {
    auto& m = raw.truth[i] == 1 ? mp : mm;
    (raw.truth[i] == 1 ? np : nm)++;
    for (int j = 0; j < d; ++j) m[j] += raw.documents[i].features[j];
  }
  for (int j = 0; j < d; ++j) {
    mp[j] /= np;
    mm[j] /= nm;
  }
  la::Vec w(d);
  double b = 0.0;
  for (int j = 0; j < d; ++j) {
    w[j] = mp[j] - mm[j];
    b -= w[j] * (mp[j] + mm[j]) / 2.0;
  }

  auto fixed = enforce_realizable(raw, 1e-3);
  long moved = 0;
  for (int i = 0; i < raw.n(); ++i) {
    double margin = b;
    for (int j = 0; j < d; ++j) margin += w[j] * raw.documents[i].features[j];
    bool mis = raw.truth[i] == 1 ? margin < 0.0 : margin >= 0.0;
    bool changed = raw.documents[i].features != fixed.documents[i].features;
    CHECK(changed == mis);
    moved += changed;
    if (changed) {
      // now strictly on the correct side of the same bisector
      double m2 = b;
      for (int j = 0; j < d; ++j) m2 += w[j] * fixed.documents[i].features[j];
      if (raw.truth[i] == 1)
        CHECK(m2 > 0.0);
      else
        CHECK(m2 < 0.0);
    }
  }
  CHECK(moved > 0);  // separation 1.5 overlaps for sure at n=200
}

TEST_CASE("enforce_realizable rejects bad input") {
  GaussianConfig cfg;
  cfg.n = 50;
  cfg.seed = 1;
  auto raw = gaussian_mixture(cfg);
  CHECK_THROWS(enforce_realizable(raw, 0.0));
  Instance one_class;
  one_class.dim = 1;
  one_class.documents = {{1, {0.0}}, {2, {1.0}}};
  one_class.truth = {1, 1};
  CHECK_THROWS(enforce_realizable(one_class, 1e-3));
}

TEST_CASE("lower bound family at N=8") {
  auto fam = lower_bound_family(8);
  REQUIRE(fam.instances.size() == 3);
  REQUIRE(fam.buckets.size() == 3);
  CHECK(fam.positions.size() == 8);
  for (int i = 0; i + 1 < 8; ++i) CHECK(fam.positions[i] > fam.positions[i + 1]);

  // bucket j covers positions 2^{j-1}+1 .. 2^j (1-based), stored 0-based
  CHECK(fam.buckets[0] == std::vector<int>{1});
  CHECK(fam.buckets[1] == std::vector<int>{2, 3});
  CHECK(fam.buckets[2] == std::vector<int>{4, 5, 6, 7});

  // instance j=2 labels x1 and the bucket {x3, x4} responsive
  const auto& inst = fam.instances[1];
  for (int i = 0; i < 8; ++i) {
    bool pos = i == 0 || i == 2 || i == 3;
    CHECK(inst.labels[i] == (pos ? 1 : -1));
  }
  // its best threshold covers the whole prefix through x_{2^j}
  auto [t_star, err_star] = optimal_threshold_true(inst);
  CHECK(t_star == fam.positions[3]);  // x4 = x_{2^2}
  CHECK(err_star == 1);               // only x2 misclassified

  // every instance has err* = 2^{j-1} - 1
  for (size_t j = 1; j <= 3; ++j) {
    auto [t, e] = optimal_threshold_true(fam.instances[j - 1]);
    CHECK(t == fam.positions[(1 << j) - 1]);
    CHECK(e == (1L << (j - 1)) - 1);
  }
  CHECK_THROWS(lower_bound_family(7));
  CHECK_THROWS(lower_bound_family(1));
}

TEST_CASE("instance files round-trip bit-exactly") {
  GaussianConfig cfg;
  cfg.n = 60;
  cfg.d = 5;
  cfg.positive_ratio = 0.2;
  cfg.seed = 77;
  auto inst = gaussian_mixture(cfg);
  const std::string path = "roundtrip_test_instance.txt";
  save_instance(inst, path);
  auto back = load_instance(path);
  CHECK(back.dim == inst.dim);
  REQUIRE(back.n() == inst.n());
  CHECK(back.truth == inst.truth);
  for (int i = 0; i < inst.n(); ++i) {
    CHECK(back.documents[i].id == inst.documents[i].id);
    CHECK(back.documents[i].features == inst.documents[i].features);  // exact
  }
  std::remove(path.c_str());
}

TEST_CASE("instance file parse errors carry line numbers") {
  const std::string path = "bad_test_instance.txt";
  auto error_of = [&](const char* contents) {
    std::ofstream f(path);
    f << contents;
    f.close();
    try {
      load_instance(path);
    } catch (const std::runtime_error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(error_of("dim=2 count=1\n1\t5\t0.0 0.0\n").find("line 2") != std::string::npos);
  CHECK(error_of("dim=2 count=1\n1\t1\t0.0\n").find("line 2") != std::string::npos);
  CHECK(error_of("dim=2 count=3\n1\t1\t0.0 1.0\n").find("count") != std::string::npos);
  CHECK(error_of("bogus header\n").find("line 1") != std::string::npos);
  CHECK(!error_of("").empty());
  std::remove(path.c_str());
  CHECK_THROWS(load_instance(path));  // missing file
}
