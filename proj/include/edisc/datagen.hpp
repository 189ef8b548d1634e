#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edisc/core_model.hpp"

namespace edisc {

struct GaussianConfig {
  int n = 1000;
  int d = 2;
  double positive_ratio = 0.05;
  // distance between the class means along the first axis; "two standard
  // Gaussians" does not pin this down, so it is recorded with every run
  double mean_separation = 2.0;
  uint64_t seed = 0;
};

// Positives ~ N(+mu e1, I), negatives ~ N(-mu e1, I) with mu = separation/2.
Instance gaussian_mixture(const GaussianConfig& cfg);

// Reflects every point misclassified by the perpendicular bisector of the
// class means across that plane, offset by epsilon toward its correct side.
Instance enforce_realizable(const Instance& inst, double epsilon);

// The log2(N)-instance family behind the Omega(ln N) disclosure lower bound:
// shared positions, instance j labels {x1} and bucket j positive.
struct LowerBoundFamily {
  std::vector<OneDimInstance> instances;              // j = 1..log2(N)
  std::vector<std::vector<int>> buckets;              // bucket j-1: indices into positions
  std::vector<double> positions;                      // x1 > x2 > ... > xN
};

LowerBoundFamily lower_bound_family(int n);

// Plain-text instance files: header "dim=<d> count=<n>", then one document
// per line: id<TAB>label<TAB>v1 v2 ... vd. Round-trips bit-exactly.
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace edisc
