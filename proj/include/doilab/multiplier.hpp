#ifndef DOILAB_MULTIPLIER_HPP
#define DOILAB_MULTIPLIER_HPP

#include <cstdint>
#include <optional>

#include "doilab/doi.hpp"

namespace doilab {

/// Symbol sampled on the product spectrum: entries(j, i) = Phi(x_i, y_j),
/// rows indexed by the B-spectrum and columns by the A-spectrum.
class DiscreteSymbolMatrix {
 public:
  explicit DiscreteSymbolMatrix(CMatrix entries);

  const CMatrix& entries() const { return m_; }
  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }

 private:
  CMatrix m_;
};

DiscreteSymbolMatrix sample_symbol(const Symbol& phi, const JointSpectrum& specA,
                                   const JointSpectrum& specB);

/// M(j, i) = sum_k a_vecs(j, k) b_vecs(i, k), i.e. M = A B^T, with value
/// (max_j ||a_j||) (max_i ||b_i||) >= ||M||_mult.
struct HaagerupFactorization {
  int rank = 0;
  CMatrix a_vecs;
  CMatrix b_vecs;
  double value = 0.0;
  double reconstruction_error = 0.0;  // max |A B^T - M| / max |M|
  /// Best dual value ||D_x M D_y||_S1 seen during the ascent (a certified
  /// lower bound on the multiplier norm).
  double dual_lower = 0.0;
  int iterations = 0;
};

/// Upper bound by Haagerup factorization. The iteration re-weights rows and
/// columns with unit vectors x, y; each step factors M through the SVD of
/// D_x M D_y (the first step, x and y uniform, is the plain SVD split) and
/// moves x, y to the fixed point where all factor row norms equalize.
/// rank defaults to min(rows, cols); RankTooSmall if M has larger rank.
HaagerupFactorization multiplier_norm_upper(const DiscreteSymbolMatrix& M,
                                            std::optional<int> rank = std::nullopt,
                                            int iters = 500, std::uint64_t seed = 0);

/// max ||M o R||_op / ||R||_op over `trials` complex Gaussian R and a fixed
/// set of structured candidates.
double multiplier_norm_lower(const DiscreteSymbolMatrix& M, int trials = 64, std::uint64_t seed = 0);

struct BracketConfig {
  std::optional<int> rank;
  int iters = 500;
  int trials = 64;
  std::uint64_t seed = 0;
};

struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
  double gap = 0.0;
  int rank = 0;
};

Bracket bracket(const DiscreteSymbolMatrix& M, const BracketConfig& config = {});

}  // namespace doilab

#endif  // DOILAB_MULTIPLIER_HPP
