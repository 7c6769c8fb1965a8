#include "doilab/symbols.hpp"

#include <sstream>

namespace doilab {

namespace {

[[noreturn]] void missing(const Function2& f, const char* which) {
  throw Error(ErrorCode::MissingDerivative,
              "divided difference of " + f.label + " hit a coincident point but " + which +
                  " is unavailable");
}

}  // namespace

Symbol divided_diff_symbol_var2(const Function2& f) {
  return {[f](const Point2& x, const Point2& y) -> Complex {
            const Complex w = x(1) + kI;
            if (coincident(x(1), y(1))) {
              if (!f.d2) missing(f, "d2");
              return (*f.d2)(x(0), x(1)) * w;
            }
            return (f(x(0), y(1)) - f(x(0), x(1))) / (y(1) - x(1)) * w;
          },
          "dd2[" + f.label + "]"};
}

Symbol divided_diff_symbol_var1(const Function2& f) {
  return {[f](const Point2& x, const Point2& y) -> Complex {
            const Complex w = x(0) + kI;
            if (coincident(x(0), y(0))) {
              if (!f.d1) missing(f, "d1");
              return (*f.d1)(x(0), y(1)) * w;
            }
            return (f(y(0), y(1)) - f(x(0), y(1))) / (y(0) - x(0)) * w;
          },
          "dd1[" + f.label + "]"};
}

Symbol split_symbol_var1(const Function2& f) {
  // [f(y)(y1+i) - f(x1,y2)(x1+i)] / (y1-x1) is evaluated as Phi1(x,y) + f(y):
  // the same function, without the cancellation of the two weighted terms
  // when y1 is close to x1.
  const Symbol phi1 = divided_diff_symbol_var1(f);
  return {[f, phi1](const Point2& x, const Point2& y) -> Complex { return phi1(x, y) + f(y(0), y(1)); },
          "split1[" + f.label + "]"};
}

RectGrid RectGrid::symmetric(double radius, int points) {
  if (points < 1 || !(radius >= 0.0)) throw Error(ErrorCode::InvalidArgument, "bad grid request");
  if (points % 2 == 0) ++points;
  RectGrid g;
  g.s = RVector::LinSpaced(points, -radius, radius);
  // LinSpaced can miss 0 by rounding; pin the centre.
  g.s(points / 2) = 0.0;
  g.t = g.s;
  return g;
}

std::string RectGrid::describe() const {
  std::ostringstream out;
  out << s.size() << "x" << t.size() << " on [" << (s.size() ? s.minCoeff() : 0.0) << ","
      << (s.size() ? s.maxCoeff() : 0.0) << "]x[" << (t.size() ? t.minCoeff() : 0.0) << ","
      << (t.size() ? t.maxCoeff() : 0.0) << "]";
  return out.str();
}

namespace {

Eigen::Index origin_index(const RVector& axis) {
  for (Eigen::Index k = 0; k < axis.size(); ++k) {
    if (axis(k) == 0.0) return k;
  }
  throw Error(ErrorCode::GridMissingOrigin, "certificate grid must contain the origin");
}

// values(i, j) = f(s_i, t_j)
CMatrix sample(const Function2& f, const RectGrid& g) {
  CMatrix v(g.s.size(), g.t.size());
  for (Eigen::Index i = 0; i < g.s.size(); ++i) {
    for (Eigen::Index j = 0; j < g.t.size(); ++j) v(i, j) = f(g.s(i), g.t(j));
  }
  if (!v.allFinite()) throw Error(ErrorCode::EvaluationFailure, f.label + " is not finite on grid");
  return v;
}

// Relative slack for the pointwise bound checks.
constexpr double kCheckSlack = 1e-12;

}  // namespace

BoundednessCertificate lemma_triv_certificate(const Function2& f, const RectGrid& grid) {
  const Eigen::Index s0 = origin_index(grid.s);
  const Eigen::Index t0 = origin_index(grid.t);
  const CMatrix v = sample(f, grid);
  const Eigen::Index ns = grid.s.size();
  const Eigen::Index nt = grid.t.size();

  double c = 0.0;
  // Second-variable hypothesis: fixed x1 = s_i, x2 = t_a, y2 = t_b.
  for (Eigen::Index i = 0; i < ns; ++i) {
    for (Eigen::Index a = 0; a < nt; ++a) {
      const double w = std::abs(grid.t(a) + kI);
      for (Eigen::Index b = 0; b < nt; ++b) {
        if (b == a) continue;
        c = std::max(c, std::abs(v(i, b) - v(i, a)) * w / std::abs(grid.t(b) - grid.t(a)));
      }
    }
  }
  // First-variable hypothesis: x1 = s_a, y1 = s_b, y2 = t_j.
  for (Eigen::Index j = 0; j < nt; ++j) {
    for (Eigen::Index a = 0; a < ns; ++a) {
      const double w = std::abs(grid.s(a) + kI);
      for (Eigen::Index b = 0; b < ns; ++b) {
        if (b == a) continue;
        c = std::max(c, std::abs(v(b, j) - v(a, j)) * w / std::abs(grid.s(b) - grid.s(a)));
      }
    }
  }

  BoundednessCertificate cert;
  cert.C = c;
  cert.bound = 2.0 * c + std::abs(v(s0, t0));
  cert.grid = grid.describe();
  cert.sup_f = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < ns; ++i) {
    for (Eigen::Index j = 0; j < nt; ++j) {
      if (std::abs(v(i, j)) > cert.bound * (1.0 + kCheckSlack) + kCheckSlack) ++cert.violations;
    }
  }
  return cert;
}

BoundednessCertificate lemma_triv1_certificate(const Function2& f, const RectGrid& grid) {
  const Eigen::Index s0 = origin_index(grid.s);
  origin_index(grid.t);
  const CMatrix v = sample(f, grid);
  const Eigen::Index ns = grid.s.size();
  const Eigen::Index nt = grid.t.size();

  double c = 0.0;
  for (Eigen::Index i = 0; i < ns; ++i) {
    for (Eigen::Index a = 0; a < nt; ++a) {
      const Complex fa = v(i, a) * (grid.t(a) + kI);
      for (Eigen::Index b = 0; b < nt; ++b) {
        if (b == a) continue;
        const Complex fb = v(i, b) * (grid.t(b) + kI);
        c = std::max(c, std::abs(fb - fa) / std::abs(grid.t(b) - grid.t(a)));
      }
    }
  }
  for (Eigen::Index j = 0; j < nt; ++j) {
    for (Eigen::Index a = 0; a < ns; ++a) {
      const Complex fa = v(a, j) * (grid.s(a) + kI);
      for (Eigen::Index b = 0; b < ns; ++b) {
        if (b == a) continue;
        const Complex fb = v(b, j) * (grid.s(b) + kI);
        c = std::max(c, std::abs(fb - fa) / std::abs(grid.s(b) - grid.s(a)));
      }
    }
  }

  BoundednessCertificate cert;
  cert.C = c;
  cert.C1 = v.row(s0).cwiseAbs().maxCoeff();
  cert.grid = grid.describe();
  cert.sup_f = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < ns; ++i) {
    const double t = grid.s(i);
    const double local = (c * std::abs(t) + cert.C1) / std::abs(t + kI);
    cert.bound = std::max(cert.bound, local);
    for (Eigen::Index j = 0; j < nt; ++j) {
      if (std::abs(v(i, j)) > local * (1.0 + kCheckSlack) + kCheckSlack) ++cert.violations;
    }
  }
  return cert;
}

GrowthReport certificate_growth(const Function2& f, const std::vector<double>& radii, int points) {
  GrowthReport report;
  for (double r : radii) {
    report.radii.push_back(r);
    report.constants.push_back(lemma_triv_certificate(f, RectGrid::symmetric(r, points)).C);
  }
  // Non-conforming when the constant grows by more than 10% per radius step
  // across the whole ladder.
  for (std::size_t k = 1; k < report.constants.size(); ++k) {
    if (report.constants[k] <= 1.1 * report.constants[k - 1]) return report;
  }
  report.conforming = report.constants.size() < 2;
  return report;
}

}  // namespace doilab
