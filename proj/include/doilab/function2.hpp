#ifndef DOILAB_FUNCTION2_HPP
#define DOILAB_FUNCTION2_HPP

#include <functional>
#include <optional>
#include <string>

#include "doilab/linalg.hpp"
#include "json.hpp"

namespace doilab {

using ScalarFn = std::function<Complex(double, double)>;

/// A complex function of two real variables with optional closed-form
/// partial derivatives d1 = d/ds and d2 = d/dt.
struct Function2 {
  ScalarFn eval;
  std::optional<ScalarFn> d1;
  std::optional<ScalarFn> d2;
  std::string label;

  Complex operator()(double s, double t) const { return eval(s, t); }
};

/// Built-in catalog. Every entry carries closed-form partials.
namespace catalog {

Function2 constant(Complex c);
Function2 coord1();
Function2 coord2();
/// sum_{i,j} coeffs(i, j) s^i t^j; total degree at most 4.
Function2 polynomial(const CMatrix& coeffs);
/// e^{i(a s + b t)}
Function2 exp2(double a, double b);
/// e^{-alpha (s^2 + t^2)}
Function2 gaussian(double alpha);
/// (s+i)^{-1} (t+i)^{-1}
Function2 resolvent();
/// (s+i)^{-1}
Function2 resolvent_s();
/// (s+i)^{-1} e^{i t}
Function2 resolvent_s_exp_t();
/// sin(t) / (1 + t^2) * cos(s)
Function2 sincos();

}  // namespace catalog

Function2 product(const Function2& f, const Function2& g);
Function2 conjugate(const Function2& f);
/// (s, t) -> f(k s, k t)
Function2 dilate(const Function2& f, double k);

/// g1(s,t) = f(s,t)(s+i) and g2(s,t) = f(s,t)(t+i).
Function2 weighted_by_first(const Function2& f);
Function2 weighted_by_second(const Function2& f);

/// Canonical catalog reference with every parameter made explicit, e.g.
/// "exp2" -> {"name": "exp2", "a": 1, "b": 2}. Validates like make_function.
nlohmann::json resolve_function_ref(const nlohmann::json& ref);

/// Resolves {"name": ..., params...} (or a bare name string) against the
/// catalog. Unknown names or parameters raise UnknownFunction / ConfigError.
Function2 make_function(const nlohmann::json& ref);

}  // namespace doilab

#endif  // DOILAB_FUNCTION2_HPP
