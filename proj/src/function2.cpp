#include "doilab/function2.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace doilab {
namespace catalog {

Function2 constant(Complex c) {
  auto zero = [](double, double) { return Complex{}; };
  std::ostringstream label;
  label << "const(" << c.real() << "," << c.imag() << ")";
  return {[c](double, double) { return c; }, zero, zero, label.str()};
}

Function2 coord1() {
  return {[](double s, double) { return Complex{s}; },
          [](double, double) { return Complex{1.0}; },
          [](double, double) { return Complex{}; }, "s"};
}

Function2 coord2() {
  return {[](double, double t) { return Complex{t}; },
          [](double, double) { return Complex{}; },
          [](double, double) { return Complex{1.0}; }, "t"};
}

namespace {

Complex poly_eval(const CMatrix& c, double s, double t) {
  Complex acc{};
  double si = 1.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    double tj = 1.0;
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      acc += c(i, j) * si * tj;
      tj *= t;
    }
    si *= s;
  }
  return acc;
}

}  // namespace

Function2 polynomial(const CMatrix& coeffs) {
  for (Eigen::Index i = 0; i < coeffs.rows(); ++i) {
    for (Eigen::Index j = 0; j < coeffs.cols(); ++j) {
      if (i + j > 4 && coeffs(i, j) != Complex{}) {
        throw Error(ErrorCode::InvalidArgument, "polynomial degree exceeds 4");
      }
    }
  }
  // Coefficients of the partials, shifted down one power.
  CMatrix ds = CMatrix::Zero(std::max<Eigen::Index>(coeffs.rows() - 1, 1), coeffs.cols());
  for (Eigen::Index i = 1; i < coeffs.rows(); ++i) ds.row(i - 1) = double(i) * coeffs.row(i);
  CMatrix dt = CMatrix::Zero(coeffs.rows(), std::max<Eigen::Index>(coeffs.cols() - 1, 1));
  for (Eigen::Index j = 1; j < coeffs.cols(); ++j) dt.col(j - 1) = double(j) * coeffs.col(j);

  std::ostringstream label;
  label << "poly[";
  bool first = true;
  for (Eigen::Index i = 0; i < coeffs.rows(); ++i) {
    for (Eigen::Index j = 0; j < coeffs.cols(); ++j) {
      if (coeffs(i, j) == Complex{}) continue;
      if (!first) label << " + ";
      first = false;
      label << "(" << coeffs(i, j).real() << "," << coeffs(i, j).imag() << ")s^" << i << "t^" << j;
    }
  }
  label << "]";
  return {[coeffs](double s, double t) { return poly_eval(coeffs, s, t); },
          [ds](double s, double t) { return poly_eval(ds, s, t); },
          [dt](double s, double t) { return poly_eval(dt, s, t); }, label.str()};
}

Function2 exp2(double a, double b) {
  auto f = [a, b](double s, double t) { return std::exp(kI * (a * s + b * t)); };
  std::ostringstream label;
  label << "exp2(" << a << "," << b << ")";
  return {f, [f, a](double s, double t) { return kI * a * f(s, t); },
          [f, b](double s, double t) { return kI * b * f(s, t); }, label.str()};
}

Function2 gaussian(double alpha) {
  auto f = [alpha](double s, double t) { return Complex{std::exp(-alpha * (s * s + t * t))}; };
  std::ostringstream label;
  label << "gauss(" << alpha << ")";
  return {f, [f, alpha](double s, double t) { return -2.0 * alpha * s * f(s, t); },
          [f, alpha](double s, double t) { return -2.0 * alpha * t * f(s, t); }, label.str()};
}

Function2 resolvent() {
  auto f = [](double s, double t) { return 1.0 / ((s + kI) * (t + kI)); };
  return {f, [f](double s, double t) { return -f(s, t) / (s + kI); },
          [f](double s, double t) { return -f(s, t) / (t + kI); }, "resolvent"};
}

Function2 resolvent_s() {
  return {[](double s, double) { return 1.0 / (s + kI); },
          [](double s, double) { return -1.0 / ((s + kI) * (s + kI)); },
          [](double, double) { return Complex{}; }, "resolvent_s"};
}

Function2 resolvent_s_exp_t() {
  auto f = [](double s, double t) { return std::exp(kI * t) / (s + kI); };
  return {f, [f](double s, double t) { return -f(s, t) / (s + kI); },
          [f](double s, double t) { return kI * f(s, t); }, "resolvent_s_exp_t"};
}

Function2 sincos() {
  auto f = [](double s, double t) { return Complex{std::sin(t) / (1.0 + t * t) * std::cos(s)}; };
  auto ds = [](double s, double t) {
    return Complex{-std::sin(t) / (1.0 + t * t) * std::sin(s)};
  };
  auto dt = [](double s, double t) {
    const double q = 1.0 + t * t;
    return Complex{(std::cos(t) / q - 2.0 * t * std::sin(t) / (q * q)) * std::cos(s)};
  };
  return {f, ds, dt, "sincos"};
}

}  // namespace catalog

namespace {

std::optional<ScalarFn> product_rule(const Function2& f, const Function2& g,
                                     const std::optional<ScalarFn>& df,
                                     const std::optional<ScalarFn>& dg) {
  if (!df || !dg) return std::nullopt;
  return [fe = f.eval, ge = g.eval, df = *df, dg = *dg](double s, double t) {
    return df(s, t) * ge(s, t) + fe(s, t) * dg(s, t);
  };
}

}  // namespace

Function2 product(const Function2& f, const Function2& g) {
  return {[fe = f.eval, ge = g.eval](double s, double t) { return fe(s, t) * ge(s, t); },
          product_rule(f, g, f.d1, g.d1), product_rule(f, g, f.d2, g.d2),
          "(" + f.label + ")*(" + g.label + ")"};
}

Function2 conjugate(const Function2& f) {
  auto conj_of = [](const std::optional<ScalarFn>& d) -> std::optional<ScalarFn> {
    if (!d) return std::nullopt;
    return [d = *d](double s, double t) { return std::conj(d(s, t)); };
  };
  return {[fe = f.eval](double s, double t) { return std::conj(fe(s, t)); }, conj_of(f.d1),
          conj_of(f.d2), "conj(" + f.label + ")"};
}

Function2 dilate(const Function2& f, double k) {
  auto scaled = [k](const std::optional<ScalarFn>& d) -> std::optional<ScalarFn> {
    if (!d) return std::nullopt;
    return [d = *d, k](double s, double t) { return k * d(k * s, k * t); };
  };
  std::ostringstream label;
  label << f.label << "@x" << k;
  return {[fe = f.eval, k](double s, double t) { return fe(k * s, k * t); }, scaled(f.d1),
          scaled(f.d2), label.str()};
}

Function2 weighted_by_first(const Function2& f) {
  CMatrix c = CMatrix::Zero(2, 1);
  c(0, 0) = kI;
  c(1, 0) = 1.0;
  Function2 g = product(f, catalog::polynomial(c));
  g.label = "(" + f.label + ")*(s+i)";
  return g;
}

Function2 weighted_by_second(const Function2& f) {
  CMatrix c = CMatrix::Zero(1, 2);
  c(0, 0) = kI;
  c(0, 1) = 1.0;
  Function2 g = product(f, catalog::polynomial(c));
  g.label = "(" + f.label + ")*(t+i)";
  return g;
}

namespace {

double number_param(const nlohmann::json& ref, const char* key, double fallback) {
  if (!ref.contains(key)) return fallback;
  const auto& v = ref.at(key);
  if (!v.is_number()) {
    throw Error(ErrorCode::ConfigError, std::string("function parameter '") + key +
                                            "' must be a number");
  }
  return v.get<double>();
}

Complex complex_value(const nlohmann::json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw Error(ErrorCode::ConfigError, "complex value must be a number or [re, im]");
}

void check_keys(const nlohmann::json& ref, const std::set<std::string>& allowed) {
  for (const auto& item : ref.items()) {
    if (item.key() != "name" && !allowed.count(item.key())) {
      throw Error(ErrorCode::ConfigError, "unknown function parameter '" + item.key() + "'");
    }
  }
}

}  // namespace

nlohmann::json resolve_function_ref(const nlohmann::json& ref_in) {
  nlohmann::json ref = ref_in;
  if (ref.is_string()) ref = nlohmann::json{{"name", ref.get<std::string>()}};
  make_function(ref);
  const std::string name = ref["name"].get<std::string>();
  if (name == "const") {
    ref["c"] = number_param(ref, "c", 1.0);
    ref["ci"] = number_param(ref, "ci", 0.0);
  } else if (name == "exp2") {
    ref["a"] = number_param(ref, "a", 1.0);
    ref["b"] = number_param(ref, "b", 2.0);
  } else if (name == "gauss") {
    ref["alpha"] = number_param(ref, "alpha", 1.0);
  }
  return ref;
}

Function2 make_function(const nlohmann::json& ref_in) {
  nlohmann::json ref = ref_in;
  if (ref.is_string()) ref = nlohmann::json{{"name", ref.get<std::string>()}};
  if (!ref.is_object() || !ref.contains("name") || !ref["name"].is_string()) {
    throw Error(ErrorCode::ConfigError, "function reference needs a string 'name'");
  }
  const std::string name = ref["name"].get<std::string>();

  if (name == "const") {
    check_keys(ref, {"c", "ci"});
    return catalog::constant({number_param(ref, "c", 1.0), number_param(ref, "ci", 0.0)});
  }
  if (name == "coord1") {
    check_keys(ref, {});
    return catalog::coord1();
  }
  if (name == "coord2") {
    check_keys(ref, {});
    return catalog::coord2();
  }
  if (name == "poly") {
    check_keys(ref, {"coeffs"});
    if (!ref.contains("coeffs") || !ref["coeffs"].is_array() || ref["coeffs"].empty()) {
      throw Error(ErrorCode::ConfigError, "poly needs a non-empty 'coeffs' array of rows");
    }
    const auto& rows = ref["coeffs"];
    std::size_t cols = 0;
    for (const auto& row : rows) {
      if (!row.is_array()) throw Error(ErrorCode::ConfigError, "poly coeffs must be nested arrays");
      cols = std::max(cols, row.size());
    }
    CMatrix c = CMatrix::Zero(Eigen::Index(rows.size()), Eigen::Index(std::max<std::size_t>(cols, 1)));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows[i].size(); ++j) {
        c(Eigen::Index(i), Eigen::Index(j)) = complex_value(rows[i][j]);
      }
    }
    return catalog::polynomial(c);
  }
  if (name == "exp2") {
    check_keys(ref, {"a", "b"});
    return catalog::exp2(number_param(ref, "a", 1.0), number_param(ref, "b", 2.0));
  }
  if (name == "gauss") {
    check_keys(ref, {"alpha"});
    return catalog::gaussian(number_param(ref, "alpha", 1.0));
  }
  if (name == "resolvent") {
    check_keys(ref, {});
    return catalog::resolvent();
  }
  if (name == "resolvent_s") {
    check_keys(ref, {});
    return catalog::resolvent_s();
  }
  if (name == "resolvent_s_exp_t") {
    check_keys(ref, {});
    return catalog::resolvent_s_exp_t();
  }
  if (name == "sincos") {
    check_keys(ref, {});
    return catalog::sincos();
  }
  throw Error(ErrorCode::UnknownFunction, "unknown catalog function '" + name + "'");
}

}  // namespace doilab
