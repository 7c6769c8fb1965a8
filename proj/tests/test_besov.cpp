#include <cmath>
#include <vector>

#include "doctest.h"
#include "doilab/besov.hpp"
#include "doilab/error.hpp"
#include "doilab/function2.hpp"

using namespace doilab;

namespace {

// Closed-form value by direct summation over all scales that can see |xi|.
double direct_sum(double r, const FilterW& w) {
  double total = 0.0;
  for (int n = -40; n <= 40; ++n) total += std::ldexp(w(r / std::ldexp(1.0, n)), n);
  return total;
}

LpGrid fine() { return {16.0 * std::numbers::pi, 1024}; }

}  // namespace

TEST_SUITE("besov") {

TEST_CASE("filter values and invariants") {
  const FilterW w = build_w();
  CHECK(w(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w(2.0) == 0.0);
  CHECK(w(0.5) == 0.0);
  CHECK(w(1.5) + w(0.75) == doctest::Approx(1.0).epsilon(1e-15));
  for (double s : {0.25, 1.0, 4.0}) {
    const FilterReport r = validate_filter(build_w(s));
    CHECK(r.partition_residual <= 1e-10);
    CHECK(r.consistency_residual <= 1e-10);
    CHECK(r.min_value >= 0.0);
    CHECK(r.support_residual <= 1e-12);
    CHECK(r.ok());
  }
  for (double t = 0.0; t < 3.0; t += 0.01) {
    CHECK(w(t) >= 0.0);
    if (t <= 0.5 || t >= 2.0) CHECK(w(t) == 0.0);
  }
  for (double bad : {0.0, -1.0, std::nan("")}) {
    try {
      build_w(bad);
      FAIL("expected InvalidSharpness");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidSharpness);
    }
  }
}

TEST_CASE("closed form for exponentials") {
  const FilterW w = build_w();
  CHECK(besov_norm_exponential(3, 4, w) == doctest::Approx(8.0 - 4.0 * w(1.25)).epsilon(1e-14));
  CHECK(besov_norm_exponential(3, 4, w) == doctest::Approx(direct_sum(5.0, w)).epsilon(1e-13));
  CHECK(besov_norm_exponential(0, 4, w) == 4.0);
  CHECK(besov_norm_exponential(1, 0, w) == 1.0);
  for (double r : {0.3, 1.0, 1.7, 5.0, 23.0}) {
    const double a = 0.6 * r, b = 0.8 * r;
    CHECK(besov_norm_exponential(2 * a, 2 * b, w) == 2.0 * besov_norm_exponential(a, b, w));
    CHECK(besov_norm_exponential(a, b, w) == doctest::Approx(direct_sum(std::hypot(a, b), w)).epsilon(1e-12));
  }
  try {
    besov_norm_exponential(0, 0, w);
    FAIL("expected ZeroFrequency");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroFrequency);
  }
}

TEST_CASE("scale range defaults") {
  const LpGrid g;
  CHECK(g.L == doctest::Approx(16.0 * std::numbers::pi));
  CHECK(g.N == 512);
  const ScaleRange r = default_scale_range(g);
  CHECK(r.nmin == -10);
  CHECK(r.nmax == 4);
  CHECK(default_scale_range(fine()).nmax == 5);
}

TEST_CASE("zero and constant functions") {
  const FilterW w = build_w();
  const auto zero = lp_coefficients(catalog::constant(0.0), LpGrid{}, w, default_scale_range(LpGrid{}));
  for (const auto& [n, fn] : zero) CHECK(fn.cwiseAbs().maxCoeff() == 0.0);
  const BesovEstimate c = besov_norm_estimate(catalog::constant(Complex(2, -1)), LpGrid{}, w,
                                              default_scale_range(LpGrid{}));
  CHECK(c.total <= 1e-8);
  CHECK(c.leakage <= 1e-8);
}

TEST_CASE("single exponential per scale") {
  const FilterW w = build_w();
  const LpGrid g;
  const auto pieces = lp_coefficients(catalog::exp2(3, 4), g, w, default_scale_range(g));
  for (const auto& [n, fn] : pieces) {
    const double sup = fn.cwiseAbs().maxCoeff();
    if (n == 2 || n == 3) {
      CHECK(sup == doctest::Approx(w(5.0 / std::ldexp(1.0, n))).epsilon(0.02));
    } else {
      CHECK(sup <= 1e-12);
    }
  }
  const BesovEstimate est = besov_norm_estimate(catalog::exp2(3, 4), g, w, default_scale_range(g));
  const double exact = besov_norm_exponential(3, 4, w);
  CHECK(std::abs(est.total - exact) <= 0.05 * exact);
  double sum = 0.0;
  for (const auto& [n, v] : est.per_scale) sum += std::ldexp(v, n);
  CHECK(est.total == sum);
}

TEST_CASE("twenty on-grid exponentials") {
  const FilterW w = build_w();
  const LpGrid g = fine();
  // Scales up to 6 so that every |xi| <= 50 is fully partitioned (the
  // default stops at 5, whose annulus closes at 64 but whose partition is
  // complete only up to 32).
  const ScaleRange r{-10, 6};
  // Frequencies are multiples of 2 pi / L = 1/8, spread over 1 <= |xi| <= 50.
  int checked = 0;
  for (int k = 0; k < 20; ++k) {
    const double radius = std::pow(49.5, double(k) / 19.0);
    const double angle = 0.37 * k;
    const double a = std::round(8.0 * radius * std::cos(angle)) / 8.0;
    const double b = std::round(8.0 * radius * std::sin(angle)) / 8.0;
    const double norm = std::hypot(a, b);
    REQUIRE(norm >= 0.99);
    REQUIRE(norm <= 50.01);
    const double exact = besov_norm_exponential(a, b, w);
    const double est = besov_norm_estimate(catalog::exp2(a, b), g, w, r).total;
    CHECK_MESSAGE(std::abs(est - exact) <= 0.05 * exact, "a=" << a << " b=" << b);
    ++checked;
  }
  CHECK(checked == 20);
}

TEST_CASE("dilation doubles the estimate") {
  const FilterW w = build_w();
  const LpGrid g = fine();
  const ScaleRange r = default_scale_range(g);
  for (auto [a, b] : std::vector<std::pair<double, double>>{{1, 2}, {3, 4}, {0.5, -2.5}, {-7, 1}}) {
    const Function2 f = catalog::exp2(a, b);
    const double base = besov_norm_estimate(f, g, w, r).total;
    const double doubled = besov_norm_estimate(dilate(f, 2.0), g, w, r).total;
    CHECK(std::abs(doubled - 2.0 * base) <= 0.05 * 2.0 * base);
  }
}

TEST_CASE("empty scales beyond the grid") {
  const FilterW w = build_w();
  const LpGrid g;
  const ScaleRange r = default_scale_range(g);
  const double base = besov_norm_estimate(catalog::gaussian(1.0), g, w, r).total;
  const double wide = besov_norm_estimate(catalog::gaussian(1.0), g, w, {r.nmin, 2 * r.nmax + 4}).total;
  CHECK(std::abs(wide - base) <= 1e-10);
  const double narrow = besov_norm_estimate(catalog::gaussian(1.0), g, w, {r.nmin, r.nmax - 2}).total;
  CHECK(narrow <= base);
}

TEST_CASE("gaussian scale decay") {
  const FilterW w = build_w();
  const LpGrid g = fine();
  const BesovEstimate est = besov_norm_estimate(catalog::gaussian(1.0), g, w, default_scale_range(g));
  // |hat f(xi)| ~ exp(-|xi|^2 / 4): each doubling of the annulus squares the
  // decay, so successive ratios shrink much faster than any fixed power.
  const double p2 = est.per_scale.at(2), p3 = est.per_scale.at(3), p4 = est.per_scale.at(4);
  CHECK(p3 / p2 < 0.1);
  CHECK(p4 / p3 < p3 / p2);
  CHECK(p4 < 1e-6 * est.per_scale.at(0));
  CHECK(est.leakage <= 1e-8);
}

TEST_CASE("low-frequency derivative series") {
  const FilterW w = build_w();
  const auto d = derivative_scale_norms(catalog::gaussian(1.0), LpGrid{}, w, {-20, -1}, 0);
  double tail = 0.0;
  for (const auto& [n, v] : d) {
    if (n < -10) tail += v;
  }
  CHECK(tail <= 1e-6);
  double total = 0.0;
  for (const auto& [n, v] : d) total += v;
  CHECK(std::isfinite(total));
}

TEST_CASE("grid errors") {
  const FilterW w = build_w();
  try {
    besov_norm_estimate(catalog::exp2(1, 1), LpGrid{16.0 * std::numbers::pi, 500}, w, {-2, 2});
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
  // 7.5 sits at index 60 of a 128-point grid with Nyquist 8.
  try {
    besov_norm_estimate(catalog::exp2(7.5, 0), LpGrid{16.0 * std::numbers::pi, 128}, w, {-2, 2});
    FAIL("expected GridTooCoarse");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridTooCoarse);
  }
}

}
