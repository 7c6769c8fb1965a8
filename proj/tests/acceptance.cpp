// Acceptance criteria, one PASS/FAIL line each.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "doilab/besov.hpp"
#include "doilab/cli.hpp"
#include "doilab/doi.hpp"
#include "doilab/ensemble.hpp"
#include "doilab/multiplier.hpp"
#include "doilab/perturb.hpp"
#include "doilab/symbols.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace doilab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

CMatrix poly(std::initializer_list<std::tuple<int, int, Complex>> terms) {
  CMatrix c = CMatrix::Zero(4, 4);
  for (const auto& [i, j, v] : terms) c(i, j) = v;
  return c;
}

Outcome identity_suite() {
  const std::vector<Function2> fs = {
      catalog::polynomial(poly({{1, 0, 1.0}})),
      catalog::polynomial(poly({{0, 2, 1.0}, {1, 0, Complex(0, 1)}})),
      catalog::polynomial(poly({{2, 1, 1.0}, {0, 3, -0.5}, {1, 1, Complex(2, 1)}, {0, 0, 3.0}})),
      catalog::polynomial(poly({{3, 0, Complex(0.3, -1)}, {1, 2, 2.0}})),
      catalog::exp2(1.0, 2.0),
      catalog::gaussian(1.0)};
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int count = 0;
  for (Eigen::Index n : {2, 4, 8, 16, 32}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const PlantedPair a = random_planted_pair(n, seed, {-3, 3}, {-3, 3});
      const CommutingPair pa = a.pair();
      const CommutingPair pb = perturb_planted(a, 0.1, seed + 1).pair();
      const JointSpectrum sa = joint_diagonalize(pa);
      const JointSpectrum sb = joint_diagonalize(pb);
      for (const auto& f : fs) {
        const IdentityReport r = summarize_identity(
            identity_terms(sa, sb, pa.first().matrix(), pa.second().matrix(), pb.first().matrix(),
                           pb.second().matrix(), f),
            1e-9);
        worst = std::max(worst, r.relResidual);
        ++count;
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-9 && secs < 60.0,
          std::to_string(count) + " cases, max relResidual " + fmt(worst) + ", " + fmt(secs) + " s"};
}

Outcome measure_algebra() {
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const Eigen::Index n = 1 + Eigen::Index(k % 16);
    auto [a, b] = testing::random_spectra(n, 300 + k);
    std::mt19937_64 rng(k);
    CMatrix q = testing::gaussian_matrix(n, n, rng);
    q /= q.norm();
    const double c = 0.1 + 0.02 * double(k);
    const Symbol psi{[c](const Point2& x, const Point2& y) {
                       return std::exp(kI * c * (x(0) * y(1) + y(0))) / (1.0 + x(1) * x(1));
                     },
                     "psi"};
    const Symbol phi{[psi](const Point2& x, const Point2& y) { return (y(1) - x(1)) * psi(x, y); }, "phi"};
    const CMatrix b2 = functional_calculus(b, catalog::coord2());
    const CMatrix a2 = functional_calculus(a, catalog::coord2());
    const CMatrix d = doi_evaluate(b, a, phi, q) - doi_evaluate(b, a, psi, b2 * q - q * a2);
    worst = std::max(worst, operator_norm(d));
  }
  return {worst <= 1e-10, "50 instances, max deviation " + fmt(worst)};
}

Outcome hs_inequality() {
  double worst = kInfinity;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const Eigen::Index n = 1 + Eigen::Index(k % 32);
    auto [a, b] = testing::random_spectra(n, 700 + k);
    std::mt19937_64 rng(k);
    const CMatrix q = testing::gaussian_matrix(n, n, rng);
    const double c = 0.2 + 0.01 * double(k);
    const Symbol phi{[c](const Point2& x, const Point2& y) {
                       return std::sin(c * x(0) * y(1)) + kI * std::cos(x(1) - c * y(0));
                     },
                     "phi"};
    worst = std::min(worst, hs_inequality_slack(b, a, phi, q) / q.norm());
  }
  double equality = 0.0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    auto [a, b] = testing::random_spectra(6, 800 + k);
    std::mt19937_64 rng(k);
    const CMatrix q = testing::gaussian_matrix(6, 6, rng);
    const Complex c(std::cos(double(k)), 2.0 * std::sin(double(k)));
    const Symbol constant{[c](const Point2&, const Point2&) { return c; }, "c"};
    equality = std::max(equality, std::abs(hs_inequality_slack(b, a, constant, q)) / (std::abs(c) * q.norm()));
  }
  return {worst >= -1e-10 && equality <= 1e-12,
          "min slack/||Q||_S2 " + fmt(worst) + ", constant-symbol |slack| " + fmt(equality)};
}

Outcome besov_oracle() {
  const FilterW w = build_w();
  const double closed = besov_norm_exponential(3, 4, w);
  double direct = 0.0;
  for (int n = -40; n <= 40; ++n) direct += std::ldexp(w(5.0 / std::ldexp(1.0, n)), n);
  const LpGrid g;
  const double est = besov_norm_estimate(catalog::exp2(3, 4), g, w, default_scale_range(g)).total;
  const FilterReport fr = validate_filter(w);
  const double rel = std::abs(est - closed) / closed;
  const bool ok = rel <= 0.05 && std::abs(closed - (8.0 - 4.0 * w(1.25))) <= 1e-14 &&
                  std::abs(closed - direct) <= 1e-12 && fr.partition_residual <= 1e-10;
  return {ok, "estimate " + fmt(est) + " vs closed form " + fmt(closed) + " (rel " + fmt(rel) + "), direct sum " +
                  fmt(direct) + ", partition residual " + fmt(fr.partition_residual)};
}

// max over unit nonnegative x, y of ||D_x M D_y||_S1 on an angle grid (2x2).
double dual_grid(const CMatrix& m) {
  double best = 0.0;
  const int steps = 1000;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const double a = 0.5 * std::numbers::pi * i / steps, b = 0.5 * std::numbers::pi * j / steps;
      const Eigen::Vector2cd x(std::cos(a), std::sin(a)), y(std::cos(b), std::sin(b));
      best = std::max(best, singular_values((x.asDiagonal() * m * y.asDiagonal()).eval()).sum());
    }
  }
  return best;
}

Outcome multiplier_bracket() {
  bool ok = true;
  std::ostringstream d;
  const Bracket ones = bracket(DiscreteSymbolMatrix(CMatrix::Ones(6, 5)));
  ok = ok && ones.gap <= 1e-6 && ones.lower <= 1.0 + 1e-9 && ones.upper >= 1.0 - 1e-9 && std::abs(ones.upper - 1.0) <= 1e-6;
  d << "ones [" << fmt(ones.lower) << "," << fmt(ones.upper) << "]";

  std::mt19937_64 rng(5);
  const CMatrix psi = testing::gaussian_matrix(5, 1, rng), phi = testing::gaussian_matrix(7, 1, rng);
  const double exact = psi.cwiseAbs().maxCoeff() * phi.cwiseAbs().maxCoeff();
  const Bracket r1 = bracket(DiscreteSymbolMatrix(psi * phi.transpose()));
  ok = ok && r1.gap <= 1e-6 && r1.lower <= exact + 1e-9 && r1.upper >= exact - 1e-9 && std::abs(r1.upper - exact) <= 1e-6;
  d << ", rank-one gap " << fmt(r1.gap);

  CMatrix h(2, 2);
  h << 1, 1, 1, -1;
  const double oracle = dual_grid(h);
  const Bracket bh = bracket(DiscreteSymbolMatrix(h));
  ok = ok && std::abs(oracle - std::sqrt(2.0)) <= 1e-9 && bh.lower <= oracle + 1e-3 && bh.upper >= oracle - 1e-3 &&
       bh.upper - oracle <= 1e-3 && oracle - bh.lower <= 1e-3;
  d << ", hadamard [" << fmt(bh.lower) << "," << fmt(bh.upper) << "] oracle " << fmt(oracle);

  double worst = -kInfinity;
  auto [sa, sb] = testing::random_spectra(8, 4242, {-5, 5});
  for (const Symbol& s : {divided_diff_symbol_var2(catalog::exp2(0, 1)), divided_diff_symbol_var1(catalog::gaussian(0.5)),
                          split_symbol_var1(catalog::exp2(1, 2))}) {
    const double up = bracket(sample_symbol(s, sa, sb)).upper;
    for (int k = 0; k < 50; ++k) {
      const CMatrix q = testing::gaussian_matrix(8, 8, rng);
      const CMatrix r = doi_evaluate(sb, sa, s, q);
      worst = std::max(worst, operator_norm(r) - up * operator_norm(q));
      worst = std::max(worst, schatten_norm(r, 1.0) - up * schatten_norm(q, 1.0));
    }
  }
  ok = ok && worst <= 1e-9;
  d << ", transfer excess " << fmt(worst);
  return {ok, d.str()};
}

Outcome counterexample() {
  double worst = 0.0;
  for (const auto& r : counterexample_scan({1, 10, 100, 1000})) {
    worst = std::max(worst, std::abs(r.fullFactor - double(r.n) / (r.n + 1)));
    worst = std::max(worst, std::abs(r.reFactor - r.n));
  }
  return {worst <= 1e-12, "max closed-form deviation " + fmt(worst)};
}

Outcome theorem_ratios() {
  auto run = [](double scale) {
    EnsembleSpec spec;
    spec.n = 8;
    spec.trials = 100;
    spec.perturbScale = scale;
    spec.pValues = {1.0, 2.0};
    return run_ensemble(spec, 0);
  };
  const EnsembleReport small = run(0.01), large = run(0.1), zero = run(0.0);
  bool finite = small.failures == 0 && large.failures == 0 && zero.failures == 0;
  for (const auto* rep : {&small, &large}) {
    for (const auto& t : rep->trials) {
      finite = finite && std::isfinite(t.bound.ratio);
      for (const auto& s : t.schatten) finite = finite && std::isfinite(s.ratio);
    }
  }
  bool constant_like = true;
  auto within_decade = [](double a, double b) { return a > 0 && b > 0 && std::abs(std::log10(a / b)) < 1.0; };
  constant_like = constant_like && within_decade(small.boundRatio.max, large.boundRatio.max);
  for (std::size_t k = 0; k < 2; ++k) {
    constant_like = constant_like && within_decade(small.schattenRatio[k].max, large.schattenRatio[k].max);
  }
  bool zeros = true;
  for (const auto& t : zero.trials) {
    zeros = zeros && t.bound.deviationNorm == 0.0 && t.bound.factors[0] == 0.0 && t.bound.factors[1] == 0.0 &&
            t.identity.lhsNorm == 0.0;
    for (const auto& s : t.schatten) zeros = zeros && s.numerator == 0.0 && s.ratio == 0.0;
  }
  std::ostringstream d;
  d << "max bound ratio " << fmt(small.boundRatio.max) << " (0.01) vs " << fmt(large.boundRatio.max)
    << " (0.1); max S1 ratio " << fmt(small.schattenRatio[0].max) << " vs " << fmt(large.schattenRatio[0].max)
    << "; max S2 ratio " << fmt(small.schattenRatio[1].max) << " vs " << fmt(large.schattenRatio[1].max)
    << "; zero perturbation exact: " << (zeros ? "yes" : "no");
  return {finite && constant_like && zeros, d.str()};
}

Outcome truncation() {
  const Function2 f = catalog::exp2(1, 2);
  bool monotone = true;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PlantedPair a = random_planted_pair(8, seed, {-4, 4}, {-4, 4});
    const CommutingPair pa = a.pair(), pb = perturb_planted(a, 0.1, seed + 1).pair();
    const double radius = std::max({a.lambda1.cwiseAbs().maxCoeff(), a.lambda2.cwiseAbs().maxCoeff()}) + 1.0;
    const auto rows = truncation_convergence(pa, pb, f, {0.5, 1.0, 2.0, 3.0, radius, radius + 1.0, 2.0 * radius, 100.0});
    double prev = kInfinity;
    for (const auto& r : rows) {
      if (r.cutoff >= radius) {
        monotone = monotone && r.compressedResidual <= prev;
        prev = r.compressedResidual;
      }
    }
    const IdentityReport id = verify_identity(pa, pb, f);
    worst = std::max(worst, std::abs(rows.back().compressedResidual - id.absResidual));
  }
  return {monotone && worst <= 1e-12,
          std::string("non-increasing beyond radius: ") + (monotone ? "yes" : "no") +
              ", full-cutoff vs identity residual " + fmt(worst)};
}

Outcome determinism() {
  const std::vector<std::vector<std::string>> commands = {
      {"verify-identity", "--seed", "3"},
      {"bound-ratio", "--N", "256"},
      {"schatten", "--p", "1,2,3"},
      {"besov-norm", "--fn", "exp2", "--a", "3", "--b", "4"},
      {"multiplier-norm", "--symbol", "split1"},
      {"counterexample", "--n", "1,10,100,1000"},
      {"truncation"},
      {"ensemble", "--trials", "8", "--N", "128"},
      {"validate-filters"}};
  int same = 0;
  for (const auto& args : commands) {
    std::string data[2];
    for (auto& slot : data) {
      std::ostringstream out, err;
      if (cli::run(args, out, err) != cli::kExitOk) break;
      slot = nlohmann::json::parse(out.str())["data"].dump();
    }
    if (!data[0].empty() && data[0] == data[1]) ++same;
  }
  return {same == int(commands.size()),
          std::to_string(same) + "/" + std::to_string(commands.size()) + " commands byte-identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"identity formula across sizes and functions", identity_suite},
      {"measure-algebra property", measure_algebra},
      {"Hilbert-Schmidt inequality", hs_inequality},
      {"Besov exponential oracle and partition of unity", besov_oracle},
      {"multiplier brackets and transfer inequalities", multiplier_bracket},
      {"counterexample closed forms", counterexample},
      {"bound and Schatten ratios", theorem_ratios},
      {"truncation convergence", truncation},
      {"CLI determinism", determinism}};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (k + 1) << ": " << criteria[k].first << " -- "
              << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
