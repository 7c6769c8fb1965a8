#ifndef DOILAB_PERTURB_HPP
#define DOILAB_PERTURB_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "doilab/besov.hpp"
#include "doilab/doi.hpp"
#include "doilab/spectral.hpp"
#include "doilab/symbols.hpp"

namespace doilab {

/// (B - A)(A + iI)^{-1}. A + iI is invertible whenever A is normal with
/// real spectrum, and in particular for Hermitian A.
template <typename DerivedA, typename DerivedB>
CMatrix resolvent_product(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "relative bound: operands must be square and equal size");
  }
  const CMatrix shifted = a.template cast<Complex>() +
                          kI * CMatrix::Identity(a.rows(), a.cols());
  const CMatrix delta = (b - a).template cast<Complex>();
  // X (A + iI) = B - A  <=>  (A + iI)^* X^* = (B - A)^*
  return shifted.adjoint().partialPivLu().solve(delta.adjoint()).adjoint();
}

/// ||(B - A)(A + iI)^{-1}||_op
template <typename DerivedA, typename DerivedB>
double relative_bound_factor(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return operator_norm(resolvent_product(a, b));
}

inline double relative_bound_factor(const HermitianMatrix& a, const HermitianMatrix& b) {
  return relative_bound_factor(a.matrix(), b.matrix());
}

struct IdentityReport {
  double lhsNorm = 0.0;
  double rhsNorm = 0.0;
  double absResidual = 0.0;
  double relResidual = 0.0;
  /// Operator norms of the second-variable and first-variable DOI terms.
  std::array<double, 2> termNorms{};
  bool pass = false;
};

/// The two sides of
///   f(B1,B2) - f(A1,A2) = DOI(Phi2; (B2-A2)(A2+iI)^{-1}) + DOI(Phi1; (B1-A1)(A1+iI)^{-1})
/// with the left measure from B and the right measure from A.
struct IdentityTerms {
  CMatrix lhs;
  CMatrix term2;
  CMatrix term1;
};

IdentityTerms identity_terms(const JointSpectrum& specA, const JointSpectrum& specB, const CMatrix& a1,
                             const CMatrix& a2, const CMatrix& b1, const CMatrix& b2,
                             const Function2& f);

IdentityReport summarize_identity(const IdentityTerms& terms, double tol);

IdentityReport verify_identity(const CommutingPair& pairA, const CommutingPair& pairB, const Function2& f,
                               double tol = 1e-9);

struct BesovConfig {
  LpGrid grid;
  ScaleRange range = default_scale_range(LpGrid{});
  double sharpness = 1.0;
};

/// Besov estimates of g1 = f (s+i) and g2 = f (t+i).
struct WeightedBesov {
  BesovEstimate g1;
  BesovEstimate g2;
};

WeightedBesov weighted_besov(const Function2& f, const BesovConfig& config);

struct BoundReport {
  double deviationNorm = 0.0;
  std::array<double, 2> factors{};
  double besovG1 = 0.0;
  double besovG2 = 0.0;
  /// deviation / ((besovG1 + besovG2) * max factor)
  double ratio = 0.0;
  /// deviation / (max(besovG1, besovG2) * max factor)
  double ratioMaxNorm = 0.0;
  LpGrid grid;
};

BoundReport bound_ratio(const CommutingPair& pairA, const CommutingPair& pairB, const Function2& f,
                        const BesovConfig& config = {});

/// Same, with the (pair-independent) Besov estimates supplied.
BoundReport bound_ratio(const CommutingPair& pairA, const CommutingPair& pairB, const Function2& f,
                        double besovG1, double besovG2, const LpGrid& grid = {});

struct SchattenReport {
  double p = 2.0;
  double numerator = 0.0;    // ||f(B) - f(A)||_Sp
  double denominator = 0.0;  // max_j ||B_j - A_j||_Sp
  double ratio = 0.0;
  /// ||(B_j - A_j)(A_j + iI)^{-1}||_Sp, j = 1, 2
  std::array<double, 2> hypothesis{};
  /// Nonzero numerator over a zero denominator.
  bool zeroPerturbationViolation = false;
};

SchattenReport schatten_ratio(const CommutingPair& pairA, const CommutingPair& pairB, const Function2& f,
                              double p);

struct CounterexampleRow {
  int n = 0;
  double fullFactor = 0.0;  // ||(M - N)(N + iI)^{-1}||, N = iA, M = A + iA
  double reFactor = 0.0;    // ||(Re M - Re N)(Re N + iI)^{-1}||
};

/// A = diag(1..n); evaluated on the diagonal representation.
std::vector<CounterexampleRow> counterexample_scan(const std::vector<int>& nList);

struct TruncationRow {
  double cutoff = 0.0;
  int rankP = 0;
  int rankQ = 0;
  /// ||P_M (rhs - lhs) Q_M||
  double compressedResidual = 0.0;
  double compressedRelResidual = 0.0;
  /// ||P_M rhs Q_M - rhs||
  double truncationGap = 0.0;
  /// Relative residual of the identity for the truncated pairs (Q_M A, P_M B).
  double truncatedIdentityResidual = 0.0;
};

/// P_M projects onto B-eigenvectors with |y1|, |y2| <= M; Q_M likewise for A.
std::vector<TruncationRow> truncation_convergence(const CommutingPair& pairA, const CommutingPair& pairB,
                                                  const Function2& f, const std::vector<double>& cutoffs);

/// B_j = (V U)(Lambda_j + scale * delta_j)(V U)^*, V = exp(i scale H) with
/// H Hermitian Gaussian normalized by sqrt(n), delta_j uniform in [-1, 1].
/// The random draws do not depend on `scale`.
PlantedPair perturb_planted(const PlantedPair& base, double scale, std::uint64_t seed);

}  // namespace doilab

#endif  // DOILAB_PERTURB_HPP
