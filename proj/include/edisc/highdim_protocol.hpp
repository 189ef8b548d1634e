#pragma once

#include <vector>

#include "edisc/core_model.hpp"
#include "edisc/linalg.hpp"
#include "edisc/parties.hpp"
#include "edisc/rng.hpp"

namespace edisc {

// All classification-distinct linear classifiers attaining the minimum error
// on a point set; the oracle the high-dimensional protocol assumes.
struct OptimalClassifierSet {
  std::vector<LinearModel> classifiers;
  long err_star = 0;
};

// Exhaustive enumeration (d <= 3, n <= 40): hyperplanes through every size-d
// point subset, both orientations, boundary-inclusive +/- perturbations,
// plus the two constant classifiers; de-duplicated by induced label vector.
OptimalClassifierSet enumerate_optimal_classifiers(const Instance& inst);
OptimalClassifierSet enumerate_optimal_classifiers(const Instance& inst,
                                                   const std::vector<Label>& labels);

// Euclidean distance to the nearest hyperplane among the optima.
double distance_to_hyperplane_union(const la::Vec& x, const OptimalClassifierSet& optima);

// Euclidean distance to the intersection of the optima's positive sides
// (projection onto the polyhedron via active-set enumeration); +inf when the
// intersection is empty.
double distance_to_positive_intersection(const la::Vec& x, const OptimalClassifierSet& optima);

struct HighDimConfig {
  int k = 1;
  double delta = 0.1;
  // used only in the theoretical projection argument; defaults to the mean of
  // the optima's normals when empty
  la::Vec direction;
};

// Sampling verification for d-dimensional reports: reveal Alice-positives and
// everything some report-optimal classifier calls positive, then walk the
// rest in increasing distance to the optima union, sampling with
// p = min{1, c/n(x)} where n(x) ranks by distance to the positive-side
// intersection. A court-confirmed hidden positive triggers full reveal.
ProtocolOutcome run_highdim_sampling(const Instance& inst, const std::vector<Label>& report,
                                     const BobOracle& bob, const CourtOracle& court,
                                     const HighDimConfig& cfg, Rng& rng);
ProtocolOutcome run_highdim_sampling(const Instance& inst, const AliceStrategy& alice,
                                     const BobOracle& bob, const CourtOracle& court,
                                     const HighDimConfig& cfg, Rng& rng);

// Does the positive side of h_star contain the intersection of the positive
// sides of all report optima? Checked point-wise over the instance and over
// the intersection's vertices. Test-harness tool; the protocol itself cannot
// evaluate this (it involves the unknown optimal classifier).
bool check_consistency(const LinearModel& h_star, const OptimalClassifierSet& report_optima,
                       const Instance& inst);

}  // namespace edisc
