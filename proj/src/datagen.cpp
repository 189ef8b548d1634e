#include "edisc/datagen.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "edisc/rng.hpp"

namespace edisc {

Instance gaussian_mixture(const GaussianConfig& cfg) {
  if (cfg.n < 1 || cfg.d < 1) throw std::invalid_argument("n and d must be >= 1");
  if (!(cfg.positive_ratio > 0.0 && cfg.positive_ratio < 1.0))
    throw std::invalid_argument("positive_ratio must be in (0,1)");
  if (cfg.mean_separation < 0.0) throw std::invalid_argument("mean_separation must be >= 0");
  int n_plus = static_cast<int>(std::lround(cfg.n * cfg.positive_ratio));
  if (n_plus < 1) throw std::invalid_argument("positive_ratio too small for n");

  Rng rng(cfg.seed);
  const double mu = cfg.mean_separation / 2.0;
  Instance inst;
  inst.dim = cfg.d;
  inst.documents.reserve(cfg.n);
  inst.truth.reserve(cfg.n);
  for (int i = 0; i < cfg.n; ++i) {
    bool positive = i < n_plus;
    Document doc;
    doc.id = i;
    doc.features.resize(cfg.d);
    for (int j = 0; j < cfg.d; ++j) doc.features[j] = rng.normal();
    doc.features[0] += positive ? mu : -mu;
    inst.documents.push_back(std::move(doc));
    inst.truth.push_back(positive ? 1 : -1);
  }
  return inst;
}

Instance enforce_realizable(const Instance& inst, double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  const int d = inst.dim;
  std::vector<double> mean_plus(d, 0.0), mean_minus(d, 0.0);
  long np = 0, nm = 0;
  for (int i = 0; i < inst.n(); ++i) {
    auto& m = inst.truth[i] == 1 ? mean_plus : mean_minus;
    (inst.truth[i] == 1 ? np : nm)++;
    for (int j = 0; j < d; ++j) m[j] += inst.documents[i].features[j];
  }
  if (np == 0 || nm == 0) throw std::invalid_argument("both classes required");
  for (int j = 0; j < d; ++j) {
    mean_plus[j] /= np;
    mean_minus[j] /= nm;
  }

  // perpendicular bisector of the class means
  std::vector<double> w(d);
  double wnorm2 = 0.0;
  for (int j = 0; j < d; ++j) {
    w[j] = mean_plus[j] - mean_minus[j];
    wnorm2 += w[j] * w[j];
  }
  if (wnorm2 < 1e-20) throw std::invalid_argument("class means coincide; bisector undefined");
  double wnorm = std::sqrt(wnorm2);
  double b = 0.0;
  for (int j = 0; j < d; ++j) b -= w[j] * (mean_plus[j] + mean_minus[j]) / 2.0;

  Instance out = inst;
  for (int i = 0; i < out.n(); ++i) {
    double margin = b;
    for (int j = 0; j < d; ++j) margin += w[j] * out.documents[i].features[j];
    bool positive = out.truth[i] == 1;
    bool misclassified = positive ? (margin < 0.0) : (margin >= 0.0);
    if (!misclassified) continue;
    // reflect across the bisector, then push epsilon toward the correct side
    double coeff = -2.0 * margin / wnorm2 + (positive ? epsilon : -epsilon) / wnorm;
    for (int j = 0; j < d; ++j) out.documents[i].features[j] += coeff * w[j];
  }
  return out;
}

LowerBoundFamily lower_bound_family(int n) {
  if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("N must be a power of two >= 2");
  int levels = 0;
  for (int v = n; v > 1; v >>= 1) ++levels;

  LowerBoundFamily fam;
  fam.positions.resize(n);
  for (int i = 0; i < n; ++i) fam.positions[i] = static_cast<double>(n - i);  // x1 > ... > xN

  for (int j = 1; j <= levels; ++j) {
    std::vector<int> bucket;
    for (int i = (1 << (j - 1)) + 1; i <= (1 << j); ++i) bucket.push_back(i - 1);
    fam.buckets.push_back(bucket);

    std::vector<DocId> ids(n);
    std::vector<Label> labels(n, -1);
    for (int i = 0; i < n; ++i) ids[i] = i + 1;
    labels[0] = 1;  // B0 = {x1}
    for (int i : bucket) labels[i] = 1;
    fam.instances.push_back(make_one_dim_instance(ids, fam.positions, labels));
  }
  return fam;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("float formatting failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& tok, int line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                             ": bad number '" + tok + "'");
  return v;
}

}  // namespace

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "dim=" << inst.dim << " count=" << inst.n() << "\n";
  for (int i = 0; i < inst.n(); ++i) {
    f << inst.documents[i].id << '\t' << inst.truth[i] << '\t';
    for (int j = 0; j < inst.dim; ++j) {
      if (j) f << ' ';
      f << format_double(inst.documents[i].features[j]);
    }
    f << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

Instance load_instance(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::string header;
  if (!std::getline(f, header)) throw std::runtime_error("empty instance file: " + path);
  int d = 0, count = 0;
  if (std::sscanf(header.c_str(), "dim=%d count=%d", &d, &count) != 2)
    throw std::runtime_error("parse error at line 1: bad header '" + header + "'");
  if (d < 1 || count < 0) throw std::runtime_error("parse error at line 1: invalid header values");

  Instance inst;
  inst.dim = d;
  std::string line;
  int line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string id_tok, label_tok;
    if (!std::getline(ss, id_tok, '\t') || !std::getline(ss, label_tok, '\t'))
      throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                               ": expected id<TAB>label<TAB>features");
    Document doc;
    doc.id = static_cast<DocId>(parse_double(id_tok, line_no));
    int label = static_cast<int>(parse_double(label_tok, line_no));
    if (label != 1 && label != -1)
      throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                               ": label must be -1 or +1, got '" + label_tok + "'");
    std::string rest;
    std::getline(ss, rest);
    std::istringstream fs(rest);
    std::string tok;
    while (fs >> tok) doc.features.push_back(parse_double(tok, line_no));
    if (static_cast<int>(doc.features.size()) != d)
      throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                               ": dimension mismatch");
    inst.documents.push_back(std::move(doc));
    inst.truth.push_back(label);
  }
  if (inst.n() != count)
    throw std::runtime_error("instance file " + path + ": header count " +
                             std::to_string(count) + " != " + std::to_string(inst.n()) + " rows");
  if (inst.n() == 0) throw std::runtime_error("empty instance file: " + path);
  inst.validate();
  return inst;
}

}  // namespace edisc
