#include "doilab/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace doilab {

void EnsembleSpec::validate() const {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "ensemble n must be >= 1");
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "ensemble trials must be >= 1");
  if (!(perturbScale >= 0.0)) throw Error(ErrorCode::InvalidArgument, "perturbScale must be >= 0");
  if (!(range1.lo <= range1.hi) || !(range2.lo <= range2.hi)) {
    throw Error(ErrorCode::InvalidArgument, "spectral ranges must be nonempty");
  }
  for (double p : pValues) {
    if (!(p >= 1.0) || std::isinf(p)) throw Error(ErrorCode::InvalidP, "pValues must lie in [1, inf)");
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

TrialPairs make_trial_pairs(const EnsembleSpec& spec, int trial) {
  TrialPairs t;
  t.seed = splitmix64(spec.seed * 0x100000001b3ULL + std::uint64_t(trial));
  t.a = random_planted_pair(spec.n, t.seed, spec.range1, spec.range2);
  t.b = perturb_planted(t.a, spec.perturbScale, splitmix64(t.seed));
  return t;
}

Summary summarize(std::vector<double> values) {
  Summary s;
  values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return std::isnan(v); }),
               values.end());
  s.count = int(values.size());
  if (values.empty()) {
    s.min = s.median = s.max = std::nan("");
    return s;
  }
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  const std::size_t mid = values.size() / 2;
  s.median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return s;
}

EnsembleReport run_ensemble(const EnsembleSpec& spec, int threads) {
  spec.validate();
  const Function2 f = make_function(spec.fn);

  EnsembleReport report;
  report.spec = spec;
  report.besovG1 = report.besovG2 = std::nan("");
  if (spec.computeBesov) {
    try {
      const WeightedBesov g = weighted_besov(f, spec.besov);
      report.besovG1 = g.g1.total;
      report.besovG2 = g.g2.total;
    } catch (const Error& e) {
      report.besovError = std::string(to_string(e.code())) + ": " + e.what();
    }
  }

  report.trials.resize(std::size_t(spec.trials));
  auto run_trial = [&](int k) {
    TrialResult& r = report.trials[std::size_t(k)];
    r.trial = k;
    try {
      const TrialPairs tp = make_trial_pairs(spec, k);
      r.seed = tp.seed;
      const CommutingPair pa = tp.a.pair();
      const CommutingPair pb = tp.b.pair();
      r.identity = verify_identity(pa, pb, f, spec.tol);
      r.bound = bound_ratio(pa, pb, f, report.besovG1, report.besovG2, spec.besov.grid);
      for (double p : spec.pValues) r.schatten.push_back(schatten_ratio(pa, pb, f, p));
      r.ok = true;
    } catch (const std::exception& e) {
      r.ok = false;
      r.error = e.what();
    }
  };

  int workers = threads > 0 ? threads : int(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, spec.trials);
  if (workers <= 1) {
    for (int k = 0; k < spec.trials; ++k) run_trial(k);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int k = next++; k < spec.trials; k = next++) run_trial(k);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<double> residuals;
  std::vector<double> ratios;
  std::vector<std::vector<double>> sp(spec.pValues.size());
  for (const auto& r : report.trials) {
    if (!r.ok) {
      ++report.failures;
      continue;
    }
    residuals.push_back(r.identity.relResidual);
    ratios.push_back(r.bound.ratio);
    for (std::size_t k = 0; k < r.schatten.size(); ++k) sp[k].push_back(r.schatten[k].ratio);
  }
  report.relResidual = summarize(residuals);
  report.boundRatio = summarize(ratios);
  for (auto& v : sp) report.schattenRatio.push_back(summarize(std::move(v)));
  return report;
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

nlohmann::json summary_json(const Summary& s) {
  return {{"count", s.count}, {"min", s.min}, {"median", s.median}, {"max", s.max}};
}

}  // namespace

std::string ensemble_csv(const EnsembleReport& report) {
  std::ostringstream out;
  out << "trial,n,seed,relResidual,factor1,factor2,deviationNorm,besovG1,besovG2,ratio,p,schattenRatio\n";
  for (const auto& r : report.trials) {
    if (!r.ok) continue;
    for (const auto& s : r.schatten) {
      out << r.trial << "," << report.spec.n << "," << r.seed << "," << num(r.identity.relResidual) << ","
          << num(r.bound.factors[0]) << "," << num(r.bound.factors[1]) << "," << num(r.bound.deviationNorm)
          << "," << num(r.bound.besovG1) << "," << num(r.bound.besovG2) << "," << num(r.bound.ratio) << ","
          << num(s.p) << "," << num(s.ratio) << "\n";
    }
  }
  return out.str();
}

nlohmann::json spec_json(const EnsembleSpec& spec) {
  return {{"n", spec.n},
          {"trials", spec.trials},
          {"seed", spec.seed},
          {"range1", {spec.range1.lo, spec.range1.hi}},
          {"range2", {spec.range2.lo, spec.range2.hi}},
          {"scale", spec.perturbScale},
          {"fn", spec.fn},
          {"p", spec.pValues},
          {"tol", spec.tol},
          {"L", spec.besov.grid.L},
          {"N", spec.besov.grid.N},
          {"nmin", spec.besov.range.nmin},
          {"nmax", spec.besov.range.nmax},
          {"sharpness", spec.besov.sharpness}};
}

nlohmann::json ensemble_json(const EnsembleReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.trials) {
    nlohmann::json row = {{"trial", r.trial}, {"seed", r.seed}, {"ok", r.ok}};
    if (!r.ok) {
      row["error"] = r.error;
      rows.push_back(row);
      continue;
    }
    row["relResidual"] = r.identity.relResidual;
    row["absResidual"] = r.identity.absResidual;
    row["termNorms"] = r.identity.termNorms;
    row["factor1"] = r.bound.factors[0];
    row["factor2"] = r.bound.factors[1];
    row["deviationNorm"] = r.bound.deviationNorm;
    row["ratio"] = r.bound.ratio;
    row["ratioMaxNorm"] = r.bound.ratioMaxNorm;
    nlohmann::json sp = nlohmann::json::array();
    for (const auto& s : r.schatten) {
      sp.push_back({{"p", s.p},
                    {"schattenRatio", s.ratio},
                    {"numerator", s.numerator},
                    {"denominator", s.denominator},
                    {"hypothesis1", s.hypothesis[0]},
                    {"hypothesis2", s.hypothesis[1]},
                    {"zeroPerturbationViolation", s.zeroPerturbationViolation}});
    }
    row["schatten"] = sp;
    rows.push_back(row);
  }
  nlohmann::json schatten = nlohmann::json::array();
  for (std::size_t k = 0; k < report.schattenRatio.size(); ++k) {
    nlohmann::json s = summary_json(report.schattenRatio[k]);
    s["p"] = report.spec.pValues[k];
    schatten.push_back(s);
  }
  nlohmann::json out = {{"trials", rows},
                        {"failures", report.failures},
                        {"besovG1", report.besovG1},
                        {"besovG2", report.besovG2},
                        {"relResidual", summary_json(report.relResidual)},
                        {"boundRatio", summary_json(report.boundRatio)},
                        {"schattenRatio", schatten}};
  if (!report.besovError.empty()) out["besovError"] = report.besovError;
  return out;
}

}  // namespace doilab
