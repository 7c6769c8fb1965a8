#include "doilab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "doilab/besov.hpp"
#include "doilab/ensemble.hpp"
#include "doilab/multiplier.hpp"
#include "doilab/perturb.hpp"
#include "doilab/serialize.hpp"
#include "doilab/symbols.hpp"

namespace doilab::cli {

namespace {

using nlohmann::json;

enum class Kind { Number, Integer, Text, NumberList, IntList, Interval, Function };

struct Key {
  std::string name;
  Kind kind;
  json fallback;  // null: optional, no default
  std::string help;
};

// Raised when a command's own check fails (exit status 2).
struct AssertionFailure {
  std::string code;
  std::string message;
};

const std::vector<std::string> kFunctionParams = {"a", "b", "c", "ci", "alpha"};

std::vector<Key> pair_keys(const char* fn, double scale) {
  return {{"n", Kind::Integer, 8, "matrix dimension"},
          {"fn", Kind::Function, fn, "catalog function name (or object in --config)"},
          {"scale", Kind::Number, scale, "perturbation scale"},
          {"range1", Kind::Interval, json::array({-3.0, 3.0}), "spectral interval for A1 (lo,hi)"},
          {"range2", Kind::Interval, json::array({-3.0, 3.0}), "spectral interval for A2 (lo,hi)"}};
}

std::vector<Key> besov_keys() {
  const LpGrid g;
  const ScaleRange r = default_scale_range(g);
  return {{"L", Kind::Number, g.L, "grid extent"},
          {"N", Kind::Integer, g.N, "grid points per axis (power of two)"},
          {"nmin", Kind::Integer, r.nmin, "smallest dyadic scale"},
          {"nmax", Kind::Integer, json(), "largest dyadic scale (default from the grid)"},
          {"sharpness", Kind::Number, 1.0, "filter transition sharpness"}};
}

std::vector<Key> keys_for(const std::string& command) {
  std::vector<Key> keys;
  auto add = [&keys](std::vector<Key> more) { keys.insert(keys.end(), more.begin(), more.end()); };
  if (command == "verify-identity") {
    add(pair_keys("exp2", 0.1));
    add({{"tol", Kind::Number, 1e-9, "relative residual tolerance"}});
  } else if (command == "bound-ratio") {
    add(pair_keys("gauss", 0.1));
    add(besov_keys());
  } else if (command == "schatten") {
    add(pair_keys("gauss", 0.1));
    add({{"p", Kind::NumberList, json::array({1.0, 2.0}), "Schatten exponents"}});
  } else if (command == "besov-norm") {
    add({{"fn", Kind::Function, "exp2", "catalog function"}});
    add(besov_keys());
  } else if (command == "multiplier-norm") {
    add(pair_keys("exp2", 0.1));
    add({{"symbol", Kind::Text, "dd2", "dd1 | dd2 | split1"},
         {"specA", Kind::Text, "", "JointSpectrum JSON file for the right measure"},
         {"specB", Kind::Text, "", "JointSpectrum JSON file for the left measure"},
         {"rank", Kind::Integer, 0, "factorization rank (0 = min(rows, cols))"},
         {"iters", Kind::Integer, 500, "ascent iterations"},
         {"trials", Kind::Integer, 64, "Gaussian test matrices for the lower bound"}});
  } else if (command == "counterexample") {
    add({{"n", Kind::IntList, json::array({1, 10, 100}), "dimensions to scan"}});
  } else if (command == "truncation") {
    add(pair_keys("gauss", 0.1));
    add({{"cutoffs", Kind::NumberList, json::array({0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0}),
          "spectral cutoffs M"}});
  } else if (command == "ensemble") {
    add(pair_keys("gauss", 0.1));
    add({{"trials", Kind::Integer, 10, "number of trials"},
         {"p", Kind::NumberList, json::array({1.0, 2.0}), "Schatten exponents"},
         {"tol", Kind::Number, 1e-9, "identity residual tolerance"},
         {"besov", Kind::Integer, 1, "compute Besov estimates (0/1)"}});
    add(besov_keys());
  } else if (command == "validate-filters") {
    add({{"sharpness", Kind::Number, 1.0, "filter transition sharpness"}});
  }
  for (const auto& k : keys) {
    if (k.kind == Kind::Function) {
      for (const auto& p : kFunctionParams) keys.push_back({p, Kind::Number, json(), "function parameter"});
      break;
    }
  }
  keys.push_back({"seed", Kind::Integer, 0, "random seed"});
  keys.push_back({"format", Kind::Text, "json", "json | csv"});
  keys.push_back({"out", Kind::Text, "", "report path (stdout when empty)"});
  return keys;
}

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) parts.push_back(cur);
  return parts;
}

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    config_error("option '" + key + "' expects a number, got '" + text + "'");
  }
  if (used != text.size()) config_error("option '" + key + "' expects a number, got '" + text + "'");
  return v;
}

json from_flag(const Key& key, const std::string& text) {
  switch (key.kind) {
    case Kind::Number:
    case Kind::Integer:
      return parse_number(key.name, text);
    case Kind::Text:
    case Kind::Function:
      return text;
    case Kind::NumberList:
    case Kind::IntList:
    case Kind::Interval: {
      json arr = json::array();
      for (const auto& part : split_commas(text)) arr.push_back(parse_number(key.name, part));
      return arr;
    }
  }
  return text;
}

void check_type(const Key& key, const json& v) {
  auto bad = [&](const char* what) { config_error("key '" + key.name + "' must be " + what); };
  auto is_int = [](const json& x) {
    return x.is_number() && std::isfinite(x.get<double>()) && std::floor(x.get<double>()) == x.get<double>();
  };
  switch (key.kind) {
    case Kind::Number:
      if (!v.is_number()) bad("a number");
      break;
    case Kind::Integer:
      if (!is_int(v)) bad("an integer");
      break;
    case Kind::Text:
      if (!v.is_string()) bad("a string");
      break;
    case Kind::Function:
      if (!v.is_string() && !v.is_object()) bad("a function name or object");
      break;
    case Kind::NumberList:
      if (!v.is_array() || v.empty()) bad("a non-empty list of numbers");
      for (const auto& x : v) if (!x.is_number()) bad("a non-empty list of numbers");
      break;
    case Kind::IntList:
      if (!v.is_array() || v.empty()) bad("a non-empty list of integers");
      for (const auto& x : v) if (!is_int(x)) bad("a non-empty list of integers");
      break;
    case Kind::Interval:
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) bad("[lo, hi]");
      break;
  }
}

json normalize(const Key& key, const json& v) {
  if (key.kind == Kind::Integer) return json(std::int64_t(std::llround(v.get<double>())));
  if (key.kind == Kind::IntList) {
    json arr = json::array();
    for (const auto& x : v) arr.push_back(std::int64_t(std::llround(x.get<double>())));
    return arr;
  }
  if (key.kind == Kind::Number) return json(v.get<double>());
  return v;
}

// Fold function name + loose parameters into one canonical reference.
void resolve_function(json& config) {
  if (!config.contains("fn")) return;
  json ref = config["fn"];
  if (ref.is_string()) ref = json{{"name", ref.get<std::string>()}};
  for (const auto& p : kFunctionParams) {
    if (config.contains(p)) {
      ref[p] = config[p];
      config.erase(p);
    }
  }
  config["fn"] = resolve_function_ref(ref);
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

Interval interval_of(const json& v) { return {v[0].get<double>(), v[1].get<double>()}; }

struct Outcome {
  json data;
  // Tabular rendering for --format csv.
  std::string csv;
  std::optional<AssertionFailure> failure;
};

struct PairSetup {
  PlantedPair a;
  PlantedPair b;
};

PairSetup make_pairs(const json& c) {
  EnsembleSpec spec;
  spec.n = c["n"].get<int>();
  spec.seed = c["seed"].get<std::uint64_t>();
  spec.range1 = interval_of(c["range1"]);
  spec.range2 = interval_of(c["range2"]);
  spec.perturbScale = c["scale"].get<double>();
  spec.pValues = {};
  spec.validate();
  const TrialPairs tp = make_trial_pairs(spec, 0);
  return {tp.a, tp.b};
}

BesovConfig besov_config(const json& c) {
  BesovConfig b;
  b.grid.L = c["L"].get<double>();
  b.grid.N = c["N"].get<int>();
  b.range.nmin = c["nmin"].get<int>();
  b.range.nmax = c["nmax"].get<int>();
  b.sharpness = c["sharpness"].get<double>();
  return b;
}

json identity_json(const IdentityReport& r) {
  return {{"lhsNorm", r.lhsNorm},       {"rhsNorm", r.rhsNorm},     {"absResidual", r.absResidual},
          {"relResidual", r.relResidual}, {"termNorms", r.termNorms}, {"pass", r.pass}};
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string line;
  for (const auto& c : cells) {
    if (!line.empty()) line += ",";
    line += c;
  }
  return line + "\n";
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

Outcome cmd_verify_identity(const json& c) {
  const PairSetup ps = make_pairs(c);
  const Function2 f = make_function(c["fn"]);
  const double tol = c["tol"].get<double>();
  const IdentityReport r = verify_identity(ps.a.pair(), ps.b.pair(), f, tol);
  Outcome o;
  o.data = identity_json(r);
  o.csv = csv_line({"lhsNorm", "rhsNorm", "absResidual", "relResidual", "term2Norm", "term1Norm", "pass"}) +
          csv_line({num(r.lhsNorm), num(r.rhsNorm), num(r.absResidual), num(r.relResidual),
                    num(r.termNorms[0]), num(r.termNorms[1]), r.pass ? "PASS" : "FAIL"});
  if (!r.pass) {
    std::ostringstream msg;
    msg << "relResidual " << r.relResidual << " exceeds tol " << tol;
    o.failure = AssertionFailure{"IdentityResidual", msg.str()};
  }
  return o;
}

Outcome cmd_bound_ratio(const json& c) {
  const PairSetup ps = make_pairs(c);
  const Function2 f = make_function(c["fn"]);
  const BesovConfig bc = besov_config(c);
  const WeightedBesov g = weighted_besov(f, bc);
  const BoundReport r = bound_ratio(ps.a.pair(), ps.b.pair(), f, g.g1.total, g.g2.total, bc.grid);
  Outcome o;
  o.data = {{"deviationNorm", r.deviationNorm}, {"factor1", r.factors[0]}, {"factor2", r.factors[1]},
            {"besovG1", r.besovG1},             {"besovG2", r.besovG2},   {"ratio", r.ratio},
            {"ratioMaxNorm", r.ratioMaxNorm},   {"leakageG1", g.g1.leakage}, {"leakageG2", g.g2.leakage}};
  o.csv = csv_line({"deviationNorm", "factor1", "factor2", "besovG1", "besovG2", "ratio", "ratioMaxNorm"}) +
          csv_line({num(r.deviationNorm), num(r.factors[0]), num(r.factors[1]), num(r.besovG1),
                    num(r.besovG2), num(r.ratio), num(r.ratioMaxNorm)});
  for (double v : {r.deviationNorm, r.factors[0], r.factors[1], r.besovG1, r.besovG2, r.ratio}) {
    if (!std::isfinite(v) || v < 0.0) o.failure = AssertionFailure{"BoundReportInvalid", "non-finite or negative field"};
  }
  return o;
}

Outcome cmd_schatten(const json& c) {
  const PairSetup ps = make_pairs(c);
  const Function2 f = make_function(c["fn"]);
  Outcome o;
  o.data = json::array();
  o.csv = csv_line({"p", "numerator", "denominator", "schattenRatio", "hypothesis1", "hypothesis2"});
  bool violation = false;
  for (const auto& pv : c["p"]) {
    const SchattenReport r = schatten_ratio(ps.a.pair(), ps.b.pair(), f, pv.get<double>());
    violation = violation || r.zeroPerturbationViolation;
    o.data.push_back({{"p", r.p},
                      {"numerator", r.numerator},
                      {"denominator", r.denominator},
                      {"schattenRatio", r.ratio},
                      {"hypothesis1", r.hypothesis[0]},
                      {"hypothesis2", r.hypothesis[1]},
                      {"zeroPerturbationViolation", r.zeroPerturbationViolation}});
    o.csv += csv_line({num(r.p), num(r.numerator), num(r.denominator), num(r.ratio), num(r.hypothesis[0]),
                       num(r.hypothesis[1])});
  }
  if (violation) o.failure = AssertionFailure{"ZeroPerturbation", "nonzero deviation with zero perturbation"};
  return o;
}

Outcome cmd_besov_norm(const json& c) {
  const Function2 f = make_function(c["fn"]);
  const BesovConfig bc = besov_config(c);
  const BesovEstimate est = besov_norm_estimate(f, bc.grid, build_w(bc.sharpness), bc.range);
  Outcome o;
  json per = json::object();
  o.csv = csv_line({"n", "supNorm", "weighted"});
  for (const auto& [n, v] : est.per_scale) {
    per[std::to_string(n)] = v;
    o.csv += csv_line({std::to_string(n), num(v), num(std::ldexp(v, n))});
  }
  o.data = {{"perScale", per}, {"total", est.total}, {"leakage", est.leakage}};
  return o;
}

Outcome cmd_multiplier_norm(const json& c) {
  const Function2 f = make_function(c["fn"]);
  JointSpectrum specA;
  JointSpectrum specB;
  const std::string fa = c["specA"].get<std::string>();
  const std::string fb = c["specB"].get<std::string>();
  if (fa.empty() != fb.empty()) config_error("specA and specB must be given together");
  if (!fa.empty()) {
    try {
      specA = spectrum_from_json(json::parse(read_file(fa)));
      specB = spectrum_from_json(json::parse(read_file(fb)));
    } catch (const json::parse_error& e) {
      config_error(std::string("spectrum file is not valid JSON: ") + e.what());
    }
  } else {
    const PairSetup ps = make_pairs(c);
    specA = joint_diagonalize(ps.a.pair());
    specB = joint_diagonalize(ps.b.pair());
  }
  const std::string which = c["symbol"].get<std::string>();
  Symbol phi;
  if (which == "dd1") {
    phi = divided_diff_symbol_var1(f);
  } else if (which == "dd2") {
    phi = divided_diff_symbol_var2(f);
  } else if (which == "split1") {
    phi = split_symbol_var1(f);
  } else {
    config_error("unknown symbol '" + which + "' (expected dd1, dd2 or split1)");
  }
  BracketConfig bc;
  const int rank = c["rank"].get<int>();
  if (rank > 0) bc.rank = rank;
  bc.iters = c["iters"].get<int>();
  bc.trials = c["trials"].get<int>();
  bc.seed = c["seed"].get<std::uint64_t>();
  const Bracket b = bracket(sample_symbol(phi, specA, specB), bc);
  Outcome o;
  o.data = {{"lower", b.lower}, {"upper", b.upper}, {"gap", b.gap}, {"rank", b.rank},
            {"rows", specB.dim()}, {"cols", specA.dim()}, {"symbol", phi.description}};
  o.csv = csv_line({"lower", "upper", "gap", "rank"}) +
          csv_line({num(b.lower), num(b.upper), num(b.gap), std::to_string(b.rank)});
  if (!(b.lower <= b.upper + 1e-9)) o.failure = AssertionFailure{"BracketInverted", "lower bound exceeds upper bound"};
  return o;
}

Outcome cmd_counterexample(const json& c) {
  std::vector<int> ns;
  for (const auto& v : c["n"]) ns.push_back(v.get<int>());
  const auto rows = counterexample_scan(ns);
  Outcome o;
  o.data = json::array();
  o.csv = csv_line({"n", "fullFactor", "reFactor"});
  for (const auto& r : rows) {
    o.data.push_back({{"n", r.n}, {"fullFactor", r.fullFactor}, {"reFactor", r.reFactor}});
    o.csv += csv_line({std::to_string(r.n), num(r.fullFactor), num(r.reFactor)});
    if (std::abs(r.fullFactor - double(r.n) / (r.n + 1)) > 1e-12 || std::abs(r.reFactor - r.n) > 1e-12) {
      o.failure = AssertionFailure{"ClosedFormMismatch", "counterexample factors deviate from n/(n+1), n"};
    }
  }
  return o;
}

Outcome cmd_truncation(const json& c) {
  const PairSetup ps = make_pairs(c);
  const Function2 f = make_function(c["fn"]);
  std::vector<double> cutoffs;
  for (const auto& v : c["cutoffs"]) cutoffs.push_back(v.get<double>());
  const CommutingPair pa = ps.a.pair();
  const CommutingPair pb = ps.b.pair();
  const auto rows = truncation_convergence(pa, pb, f, cutoffs);
  const double radius = std::max(
      {ps.a.lambda1.cwiseAbs().maxCoeff(), ps.a.lambda2.cwiseAbs().maxCoeff(),
       ps.b.lambda1.cwiseAbs().maxCoeff(), ps.b.lambda2.cwiseAbs().maxCoeff()});
  Outcome o;
  o.data = json::array();
  o.csv = csv_line({"cutoff", "rankP", "rankQ", "compressedResidual", "compressedRelResidual", "truncationGap",
                    "truncatedIdentityResidual"});
  double previous = kInfinity;
  bool monotone = true;
  for (const auto& r : rows) {
    o.data.push_back({{"cutoff", r.cutoff},
                      {"rankP", r.rankP},
                      {"rankQ", r.rankQ},
                      {"compressedResidual", r.compressedResidual},
                      {"compressedRelResidual", r.compressedRelResidual},
                      {"truncationGap", r.truncationGap},
                      {"truncatedIdentityResidual", r.truncatedIdentityResidual}});
    o.csv += csv_line({num(r.cutoff), std::to_string(r.rankP), std::to_string(r.rankQ),
                       num(r.compressedResidual), num(r.compressedRelResidual), num(r.truncationGap),
                       num(r.truncatedIdentityResidual)});
    if (r.cutoff >= radius) {
      monotone = monotone && r.compressedResidual <= previous;
      previous = r.compressedResidual;
    }
  }
  if (!monotone) o.failure = AssertionFailure{"NotMonotone", "residual increased beyond the spectral radius"};
  return o;
}

Outcome cmd_ensemble(const json& c, int threads) {
  EnsembleSpec spec;
  spec.n = c["n"].get<int>();
  spec.trials = c["trials"].get<int>();
  spec.seed = c["seed"].get<std::uint64_t>();
  spec.range1 = interval_of(c["range1"]);
  spec.range2 = interval_of(c["range2"]);
  spec.perturbScale = c["scale"].get<double>();
  spec.fn = c["fn"];
  spec.pValues = c["p"].get<std::vector<double>>();
  spec.tol = c["tol"].get<double>();
  spec.besov = besov_config(c);
  spec.computeBesov = c["besov"].get<int>() != 0;
  const EnsembleReport r = run_ensemble(spec, threads);
  Outcome o;
  o.data = ensemble_json(r);
  o.csv = ensemble_csv(r);
  if (r.failures > 0) o.failure = AssertionFailure{"TrialFailures", std::to_string(r.failures) + " trial(s) failed"};
  if (!(r.relResidual.max <= spec.tol)) {
    o.failure = AssertionFailure{"IdentityResidual", "max relResidual exceeds tol"};
  }
  return o;
}

Outcome cmd_validate_filters(const json& c) {
  const FilterW w = build_w(c["sharpness"].get<double>());
  const FilterReport r = validate_filter(w);
  Outcome o;
  o.data = {{"partitionResidual", r.partition_residual},
            {"consistencyResidual", r.consistency_residual},
            {"minValue", r.min_value},
            {"supportResidual", r.support_residual},
            {"w(1/2)", w(0.5)},
            {"w(1)", w(1.0)},
            {"w(2)", w(2.0)},
            {"w(3/2)+w(3/4)", w(1.5) + w(0.75)},
            {"ok", r.ok()}};
  o.csv = csv_line({"partitionResidual", "consistencyResidual", "minValue", "supportResidual", "ok"}) +
          csv_line({num(r.partition_residual), num(r.consistency_residual), num(r.min_value),
                    num(r.support_residual), r.ok() ? "true" : "false"});
  if (!r.ok()) o.failure = AssertionFailure{"FilterInvariant", "filter invariants violated"};
  return o;
}

int threads_from_env() {
  const char* v = std::getenv("DOILAB_THREADS");
  if (!v || !*v) return 0;
  try {
    return std::max(0, std::stoi(v));
  } catch (const std::exception&) {
    return 0;
  }
}

const std::vector<std::pair<std::string, std::string>> kCommands = {
    {"verify-identity", "check the two-term double operator integral formula on a random pair"},
    {"bound-ratio", "deviation over (Besov norms x relative-bound factor)"},
    {"schatten", "Schatten-p deviation ratios"},
    {"besov-norm", "Littlewood-Paley estimate of the B^1_{inf,1} norm"},
    {"multiplier-norm", "bracket the Schur multiplier norm of a divided-difference symbol"},
    {"counterexample", "relative-bound factors for N = iA, M = A + iA"},
    {"truncation", "spectral cutoff residual table"},
    {"ensemble", "seeded ensemble of identity, bound and Schatten checks"},
    {"validate-filters", "check the dyadic filter invariants"},
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"doilab: double operator integral laboratory"};
  app.require_subcommand(1);

  struct Registered {
    CLI::App* sub;
    std::vector<Key> keys;
    std::map<std::string, std::string> values;
    std::string config_path;
  };
  std::map<std::string, Registered> subs;
  for (const auto& [name, help] : kCommands) {
    Registered reg;
    reg.sub = app.add_subcommand(name, help);
    reg.keys = keys_for(name);
    subs.emplace(name, std::move(reg));
  }
  for (auto& [name, reg] : subs) {
    reg.sub->add_option("--config", reg.config_path, "JSON config file; flags override its values");
    for (const auto& key : reg.keys) reg.sub->add_option("--" + key.name, reg.values[key.name], key.help);
  }

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error code=UsageError message=\"" << e.what() << "\"\n";
    return kExitUsage;
  }

  std::string command;
  for (auto& [name, reg] : subs) {
    if (reg.sub->parsed()) command = name;
  }
  Registered& reg = subs.at(command);

  json config = json::object();
  std::string out_path;
  std::string format;
  try {
    json file = json::object();
    if (!reg.config_path.empty()) {
      try {
        file = json::parse(read_file(reg.config_path));
      } catch (const json::parse_error& e) {
        config_error(std::string("config file is not valid JSON: ") + e.what());
      }
      if (!file.is_object()) config_error("config file must hold a JSON object");
    }
    std::set<std::string> known;
    for (const auto& key : reg.keys) known.insert(key.name);
    for (const auto& item : file.items()) {
      if (!known.count(item.key())) config_error("unknown config key '" + item.key() + "'");
    }
    for (const auto& key : reg.keys) {
      json v = key.fallback;
      if (file.contains(key.name)) v = file[key.name];
      if (reg.sub->count("--" + key.name) > 0) v = from_flag(key, reg.values[key.name]);
      if (v.is_null()) continue;
      check_type(key, v);
      config[key.name] = normalize(key, v);
    }
    if (command == "bound-ratio" || command == "besov-norm" || command == "ensemble") {
      if (!config.contains("nmax")) {
        LpGrid g;
        g.L = config["L"].get<double>();
        g.N = config["N"].get<int>();
        config["nmax"] = default_scale_range(g).nmax;
      }
    }
    resolve_function(config);
    format = config["format"].get<std::string>();
    if (format != "json" && format != "csv") config_error("format must be json or csv");
    out_path = config["out"].get<std::string>();
    config.erase("out");
    config.erase("format");
  } catch (const Error& e) {
    err << "error code=" << to_string(e.code()) << " message=\"" << e.what() << "\"\n";
    return kExitUsage;
  }

  Outcome outcome;
  int status = kExitOk;
  try {
    if (command == "verify-identity") outcome = cmd_verify_identity(config);
    else if (command == "bound-ratio") outcome = cmd_bound_ratio(config);
    else if (command == "schatten") outcome = cmd_schatten(config);
    else if (command == "besov-norm") outcome = cmd_besov_norm(config);
    else if (command == "multiplier-norm") outcome = cmd_multiplier_norm(config);
    else if (command == "counterexample") outcome = cmd_counterexample(config);
    else if (command == "truncation") outcome = cmd_truncation(config);
    else if (command == "ensemble") outcome = cmd_ensemble(config, threads_from_env());
    else if (command == "validate-filters") outcome = cmd_validate_filters(config);
  } catch (const Error& e) {
    err << "error code=" << to_string(e.code()) << " message=\"" << e.what() << "\"\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error code=Internal message=\"" << e.what() << "\"\n";
    return kExitUsage;
  }
  if (outcome.failure) {
    err << "assertion code=" << outcome.failure->code << " message=\"" << outcome.failure->message << "\"\n";
    status = kExitAssertion;
  }

  std::string text;
  if (format == "json") {
    json report = {{"command", command},
                   {"config", config},
                   {"data", outcome.data},
                   {"status", status == kExitOk ? "ok" : "assertion-failed"},
                   {"meta", {{"timestamp", timestamp()}}}};
    text = report.dump(2) + "\n";
  } else {
    text = "# command: " + command + "\n# config: " + config.dump() + "\n# timestamp: " + timestamp() +
           "\n" + outcome.csv;
  }
  try {
    if (out_path.empty()) {
      out << text;
    } else {
      write_atomic(out_path, text);
    }
  } catch (const Error& e) {
    err << "error code=" << to_string(e.code()) << " message=\"" << e.what() << "\"\n";
    return kExitUsage;
  }
  return status;
}

}  // namespace doilab::cli
