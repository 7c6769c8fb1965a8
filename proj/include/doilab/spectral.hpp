#ifndef DOILAB_SPECTRAL_HPP
#define DOILAB_SPECTRAL_HPP

#include <cstdint>
#include <optional>
#include <random>

#include "doilab/function2.hpp"
#include "doilab/linalg.hpp"

namespace doilab {

/// A square complex matrix equal to its adjoint within 1e-12 (absolute,
/// entrywise). Construction validates; the stored entries are exactly
/// Hermitian after symmetrization.
class HermitianMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;

  explicit HermitianMatrix(const CMatrix& entries);

  Eigen::Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }

 private:
  CMatrix m_;
};

/// Two Hermitian matrices whose commutator has operator norm <= commTol.
class CommutingPair {
 public:
  /// commTol defaults to 1e-10 * max(1, ||A1|| ||A2||).
  CommutingPair(HermitianMatrix a1, HermitianMatrix a2,
                std::optional<double> comm_tol = std::nullopt);

  const HermitianMatrix& first() const { return a1_; }
  const HermitianMatrix& second() const { return a2_; }
  double comm_tol() const { return comm_tol_; }
  Eigen::Index dim() const { return a1_.dim(); }

 private:
  HermitianMatrix a1_;
  HermitianMatrix a2_;
  double comm_tol_;
};

/// Finite atomic joint spectral measure: unitary basis (columns u_i) and the
/// joint eigenvalue pairs (x1_i, x2_i), one per row of `points`.
struct JointSpectrum {
  CMatrix basis;
  Eigen::MatrixX2d points;
  double reconstruction_residual = 0.0;

  Eigen::Index dim() const { return basis.rows(); }
  Point2 point(Eigen::Index i) const { return points.row(i).transpose(); }
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// A commuting pair built from a known unitary and known spectra.
struct PlantedPair {
  CMatrix unitary;
  RVector lambda1;
  RVector lambda2;

  CommutingPair pair() const;
};

template <typename DerivedA, typename DerivedB>
double commutator_norm(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "commutator_norm: operands must be square and equal size");
  }
  return operator_norm((a * b - b * a).eval());
}

inline double commutator_norm(const HermitianMatrix& a, const HermitianMatrix& b) {
  return commutator_norm(a.matrix(), b.matrix());
}

/// Simultaneous eigendecomposition. The residual bound defaults to
/// 1e-10 * max(1, ||A1||, ||A2||).
JointSpectrum joint_diagonalize(const CommutingPair& pair, std::optional<double> tol = std::nullopt);

/// U diag(f(x1_i, x2_i)) U*.
CMatrix functional_calculus(const JointSpectrum& spec, const Function2& f);

/// U diag(values) U* for values indexed like spec.points.
CMatrix spectral_synthesis(const JointSpectrum& spec, const CVector& values);

/// Haar unitary from QR of a complex Gaussian matrix, R with positive diagonal.
CMatrix haar_unitary(Eigen::Index n, std::mt19937_64& rng);

PlantedPair random_planted_pair(Eigen::Index n, std::uint64_t seed, Interval range1, Interval range2);

CommutingPair random_commuting_pair(Eigen::Index n, std::uint64_t seed, Interval range1, Interval range2);

}  // namespace doilab

#endif  // DOILAB_SPECTRAL_HPP
