#ifndef DOILAB_SYMBOLS_HPP
#define DOILAB_SYMBOLS_HPP

#include <string>
#include <vector>

#include "doilab/doi.hpp"
#include "doilab/function2.hpp"

namespace doilab {

/// Below this separation two spectral coordinates are treated as coincident
/// and the divided difference falls back to the partial derivative.
inline bool coincident(double a, double b) { return std::abs(b - a) <= 1e-12 * (1.0 + std::abs(a)); }

/// Phi2(x, y) = [f(x1, y2) - f(x1, x2)] / (y2 - x2) * (x2 + i)
Symbol divided_diff_symbol_var2(const Function2& f);

/// Phi1(x, y) = [f(y1, y2) - f(x1, y2)] / (y1 - x1) * (x1 + i)
Symbol divided_diff_symbol_var1(const Function2& f);

/// Psi1(x, y) = [f(y1, y2)(y1 + i) - f(x1, y2)(x1 + i)] / (y1 - x1)
///            = Phi1(x, y) + f(y1, y2)
Symbol split_symbol_var1(const Function2& f);

/// Product sample set axis_s x axis_t. Both axes must contain 0.
struct RectGrid {
  RVector s;
  RVector t;

  /// Symmetric uniform axes on [-radius, radius]; `points` is forced odd so 0
  /// is a node.
  static RectGrid symmetric(double radius, int points);
  std::string describe() const;
};

struct BoundednessCertificate {
  double C = 0.0;
  /// Largest value of the implied pointwise bound over the grid.
  double bound = 0.0;
  /// Constant C1 = sup_t |f(0, t)| (only used by the second certificate).
  double C1 = 0.0;
  std::string grid;
  int violations = 0;
  /// Largest observed |f| on the grid.
  double sup_f = 0.0;
};

/// Estimates C in
///   |f(x1,y2) - f(x1,x2)| |x2 + i| <= C |y2 - x2|,
///   |f(y1,y2) - f(x1,y2)| |x1 + i| <= C |y1 - x1|
/// over the grid and checks |f(t,s)| <= 2C + |f(0,0)| at every node.
BoundednessCertificate lemma_triv_certificate(const Function2& f, const RectGrid& grid);

/// Estimates C in
///   |f(x1,y2)(y2+i) - f(x1,x2)(x2+i)| <= C |y2 - x2|,
///   |f(y1,y2)(y1+i) - f(x1,y2)(x1+i)| <= C |y1 - x1|
/// and checks |f(t,s)| <= (C|t| + C1) / |t + i| with C1 = sup_s |f(0,s)|.
BoundednessCertificate lemma_triv1_certificate(const Function2& f, const RectGrid& grid);

/// Runs lemma_triv_certificate on nested symmetric grids; a constant that keeps
/// growing with the radius marks f as non-conforming (not bounded in the
/// required sense) instead of asserting a certificate.
struct GrowthReport {
  std::vector<double> radii;
  std::vector<double> constants;
  bool conforming = true;
};
GrowthReport certificate_growth(const Function2& f, const std::vector<double>& radii, int points);

}  // namespace doilab

#endif  // DOILAB_SYMBOLS_HPP
