#include <cmath>

#include "doctest.h"
#include "doilab/doi.hpp"
#include "doilab/error.hpp"
#include "doilab/function2.hpp"
#include "support.hpp"

using namespace doilab;

namespace {

Symbol one() {
  return {[](const Point2&, const Point2&) { return Complex(1.0); }, "1"};
}

// A smooth, non-separable test symbol.
Symbol wave(double k) {
  return {[k](const Point2& x, const Point2& y) {
            return std::exp(kI * k * (x(0) * y(1) - 0.3 * x(1) + y(0) * y(0))) / (1.0 + x.squaredNorm());
          },
          "wave"};
}

CMatrix side(const JointSpectrum& s, int coord) {
  return functional_calculus(s, coord == 0 ? catalog::coord1() : catalog::coord2());
}

}  // namespace

TEST_SUITE("doi") {

TEST_CASE("identity symbol returns Q") {
  auto [a, b] = testing::random_spectra(5, 1);
  std::mt19937_64 rng(2);
  const CMatrix q = testing::gaussian_matrix(5, 5, rng);
  CHECK((doi_evaluate(b, a, one(), q) - q).norm() <= 1e-12 * q.norm());
}

TEST_CASE("right-measure-only symbol") {
  auto [a, b] = testing::random_spectra(6, 3);
  const Function2 phi = catalog::exp2(1.0, -0.5);
  const Symbol s{[&phi](const Point2& x, const Point2&) { return phi(x(0), x(1)); }, "phi(x)"};
  const CMatrix r = doi_evaluate(a, a, s, CMatrix::Identity(6, 6));
  CHECK((r - functional_calculus(a, phi)).norm() <= 1e-12 * 6);
}

TEST_CASE("rank-one factorization oracle") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto [a, b] = testing::random_spectra(4, 100 + seed);
    std::mt19937_64 rng(seed);
    const CMatrix q = testing::gaussian_matrix(4, 4, rng);
    const Symbol s{[](const Point2& x, const Point2& y) { return Complex(x(0) * y(1)); }, "x1 y2"};
    const CMatrix oracle = side(b, 1) * q * side(a, 0);
    CHECK((doi_evaluate(b, a, s, q) - oracle).norm() < 1e-12 * std::max(1.0, oracle.norm()));
  }
}

TEST_CASE("rectangular spectra") {
  const JointSpectrum a = joint_diagonalize(random_commuting_pair(3, 1, {0, 1}, {0, 1}));
  const JointSpectrum b = joint_diagonalize(random_commuting_pair(5, 2, {0, 1}, {0, 1}));
  std::mt19937_64 rng(4);
  const CMatrix q = testing::gaussian_matrix(5, 3, rng);
  const Symbol s{[](const Point2& x, const Point2& y) { return Complex(x(1) + y(0), x(0)); }, "s"};
  const CMatrix oracle = side(b, 0) * q + q * side(a, 1) + kI * q * side(a, 0);
  CHECK((doi_evaluate(b, a, s, q) - oracle).norm() < 1e-12 * oracle.norm());
  try {
    doi_evaluate(b, a, s, CMatrix::Zero(3, 5));
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ShapeMismatch);
  }
}

TEST_CASE("symbol failures surface") {
  auto [a, b] = testing::random_spectra(3, 9);
  const Symbol nan{[](const Point2&, const Point2&) { return Complex(std::nan(""), 0.0); }, "nan"};
  try {
    doi_evaluate(b, a, nan, CMatrix::Identity(3, 3));
    FAIL("expected SymbolEvaluationFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SymbolEvaluationFailure);
  }
}

TEST_CASE("factorized evaluation") {
  auto [a, b] = testing::random_spectra(6, 12);
  std::mt19937_64 rng(5);
  const CMatrix q = testing::gaussian_matrix(6, 6, rng);
  const Function2 unit = catalog::constant(1.0);

  CHECK((doi_via_factorization(b, a, {{unit, unit}}, q) - q).norm() <= 1e-12 * q.norm());
  CHECK(doi_via_factorization(b, a, {}, q) == CMatrix::Zero(6, 6));

  // x2 + y2 as two rank-one terms.
  const std::vector<SeparableTerm> terms = {{catalog::coord2(), unit}, {unit, catalog::coord2()}};
  const Symbol direct{[](const Point2& x, const Point2& y) { return Complex(x(1) + y(1)); }, "x2+y2"};
  const CMatrix want = doi_evaluate(b, a, direct, q);
  CHECK((doi_via_factorization(b, a, terms, q) - want).norm() <= 1e-12 * want.norm());
  CHECK((doi_evaluate(b, a, assemble_symbol(terms), q) - want).norm() <= 1e-12 * want.norm());

  const std::vector<SeparableTerm> mixed = {{catalog::exp2(1, 1), catalog::gaussian(0.3)},
                                            {catalog::resolvent(), catalog::sincos()},
                                            {catalog::coord1(), catalog::resolvent_s_exp_t()}};
  const CMatrix lhs = doi_via_factorization(b, a, mixed, q);
  CHECK((lhs - doi_evaluate(b, a, assemble_symbol(mixed), q)).norm() <= 1e-10 * lhs.norm());
}

TEST_CASE("linearity") {
  auto [a, b] = testing::random_spectra(7, 30);
  std::mt19937_64 rng(6);
  const CMatrix q1 = testing::gaussian_matrix(7, 7, rng);
  const CMatrix q2 = testing::gaussian_matrix(7, 7, rng);
  const Complex al(0.3, -1.2), be(2.0, 0.5);
  const Symbol s = wave(0.7);
  const CMatrix lhs = doi_evaluate(b, a, s, al * q1 + be * q2);
  const CMatrix rhs = al * doi_evaluate(b, a, s, q1) + be * doi_evaluate(b, a, s, q2);
  CHECK((lhs - rhs).norm() <= 1e-12 * (q1.norm() + q2.norm()) * (std::abs(al) + std::abs(be)));
}

TEST_CASE("measure algebra") {
  for (std::uint64_t k = 0; k < 50; ++k) {
    const Eigen::Index n = 2 + Eigen::Index(k % 15);
    auto [a, b] = testing::random_spectra(n, 500 + k);
    std::mt19937_64 rng(k);
    CMatrix q = testing::gaussian_matrix(n, n, rng);
    q /= q.norm();
    const Symbol psi = wave(0.2 + 0.05 * double(k));
    const Symbol phi{[psi](const Point2& x, const Point2& y) { return (y(1) - x(1)) * psi(x, y); }, "(y2-x2)psi"};
    const CMatrix lhs = doi_evaluate(b, a, phi, q);
    const CMatrix rhs = doi_evaluate(b, a, psi, side(b, 1) * q - q * side(a, 1));
    CHECK((lhs - rhs).norm() <= 1e-10);
  }
}

TEST_CASE("Hilbert-Schmidt inequality") {
  auto [a, b] = testing::random_spectra(6, 40);
  std::mt19937_64 rng(7);
  const CMatrix q = testing::gaussian_matrix(6, 6, rng);
  const Complex c(1.5, -2.0);
  const Symbol constant{[c](const Point2&, const Point2&) { return c; }, "c"};
  CHECK(std::abs(hs_inequality_slack(b, a, constant, q)) <= 1e-12 * q.norm() * std::abs(c));
  CHECK(hs_inequality_slack(b, a, wave(1.0), CMatrix::Zero(6, 6)) == 0.0);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Eigen::Index n = 1 + Eigen::Index(seed % 32);
    auto [sa, sb] = testing::random_spectra(n, 900 + seed);
    std::mt19937_64 r(seed);
    const CMatrix m = testing::gaussian_matrix(n, n, r);
    const double k = 0.1 + 0.03 * double(seed);
    const Symbol unimodular{[k](const Point2& x, const Point2& y) {
                              return std::exp(kI * k * (x(0) * x(1) + 3.0 * y(0) - y(1) * x(0)));
                            },
                            "unimodular"};
    CHECK(hs_inequality_slack(sb, sa, unimodular, m) >= -1e-10 * m.norm());
  }
}

}
