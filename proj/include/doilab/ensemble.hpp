#ifndef DOILAB_ENSEMBLE_HPP
#define DOILAB_ENSEMBLE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "doilab/perturb.hpp"
#include "json.hpp"

namespace doilab {

struct EnsembleSpec {
  int n = 8;
  int trials = 10;
  std::uint64_t seed = 0;
  Interval range1{-3.0, 3.0};
  Interval range2{-3.0, 3.0};
  double perturbScale = 0.1;
  nlohmann::json fn = {{"name", "gauss"}, {"alpha", 1.0}};
  std::vector<double> pValues{1.0, 2.0};
  double tol = 1e-9;
  BesovConfig besov;
  bool computeBesov = true;

  void validate() const;
};

/// The pair of planted pairs used by trial `trial` of an ensemble.
struct TrialPairs {
  std::uint64_t seed = 0;
  PlantedPair a;
  PlantedPair b;
};

TrialPairs make_trial_pairs(const EnsembleSpec& spec, int trial);

struct TrialResult {
  int trial = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  IdentityReport identity;
  BoundReport bound;
  std::vector<SchattenReport> schatten;
};

struct Summary {
  int count = 0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

Summary summarize(std::vector<double> values);

struct EnsembleReport {
  EnsembleSpec spec;
  std::vector<TrialResult> trials;
  int failures = 0;
  /// Empty when the Besov estimates succeeded.
  std::string besovError;
  double besovG1 = 0.0;
  double besovG2 = 0.0;
  Summary relResidual;
  Summary boundRatio;
  std::vector<Summary> schattenRatio;  // one per spec.pValues entry
};

/// Trials run on `threads` workers (0 = hardware concurrency); results are
/// reduced in trial order so the report does not depend on scheduling.
EnsembleReport run_ensemble(const EnsembleSpec& spec, int threads = 1);

std::string ensemble_csv(const EnsembleReport& report);
nlohmann::json ensemble_json(const EnsembleReport& report);
nlohmann::json spec_json(const EnsembleSpec& spec);

}  // namespace doilab

#endif  // DOILAB_ENSEMBLE_HPP
