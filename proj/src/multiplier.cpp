#include "doilab/multiplier.hpp"

#include <random>

namespace doilab {

DiscreteSymbolMatrix::DiscreteSymbolMatrix(CMatrix entries) : m_(std::move(entries)) {
  if (m_.rows() < 1 || m_.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "symbol matrix must have rows, cols >= 1");
  }
  if (!m_.allFinite()) throw Error(ErrorCode::SymbolEvaluationFailure, "symbol matrix is not finite");
}

DiscreteSymbolMatrix sample_symbol(const Symbol& phi, const JointSpectrum& specA,
                                   const JointSpectrum& specB) {
  return DiscreteSymbolMatrix(symbol_matrix(phi, specA, specB));
}

namespace {

constexpr double kRankCut = 1e-12;
constexpr double kFloor = 1e-8;
constexpr double kReconstructionTol = 1e-9;

struct AscentState {
  HaagerupFactorization best;
  double best_lower = 0.0;
  int iterations = 0;
};

void normalize_with_floor(RVector& v) {
  v /= v.norm();
  v = v.cwiseMax(kFloor);
  v /= v.norm();
}

void run_ascent(const CMatrix& m, RVector x, RVector y, int rank_cap, int iters, double scale,
                AscentState& state) {
  for (int it = 0; it < iters; ++it) {
    ++state.iterations;
    const CMatrix k = x.cast<Complex>().asDiagonal() * m * y.cast<Complex>().asDiagonal();
    Eigen::JacobiSVD<CMatrix> svd(k, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& s = svd.singularValues();
    state.best_lower = std::max(state.best_lower, s.sum());
    if (s(0) == 0.0) return;

    int r = 0;
    while (r < s.size() && r < rank_cap && s(r) > kRankCut * s(0)) ++r;
    const CMatrix w = svd.matrixU().leftCols(r);
    const CMatrix z = svd.matrixV().leftCols(r);
    const RVector sr = s.head(r);

    // a = M D_y Z S^{-1/2}, b = D_y^{-1} conj(Z) S^{1/2}; a b^T = M D_y Z Z^* D_y^{-1}.
    const CMatrix a = m * y.cast<Complex>().asDiagonal() * z *
                      sr.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal();
    const CMatrix b = y.cwiseInverse().cast<Complex>().asDiagonal() * z.conjugate() *
                      sr.cwiseSqrt().cast<Complex>().asDiagonal();
    const double rec = (a * b.transpose() - m).cwiseAbs().maxCoeff() / scale;
    if (rec <= kReconstructionTol) {
      const double value = a.rowwise().norm().maxCoeff() * b.rowwise().norm().maxCoeff();
      if (state.best.rank == 0 || value < state.best.value) {
        state.best.rank = r;
        state.best.a_vecs = a;
        state.best.b_vecs = b;
        state.best.value = value;
        state.best.reconstruction_error = rec;
      }
    }
    if (state.best.rank > 0 && state.best.value - state.best_lower <= 1e-13 * state.best.value) {
      return;
    }

    RVector px = (w.cwiseAbs2() * sr).real();
    RVector py = (z.cwiseAbs2() * sr).real();
    x = px.cwiseSqrt();
    y = py.cwiseSqrt();
    normalize_with_floor(x);
    normalize_with_floor(y);
  }
}

}  // namespace

HaagerupFactorization multiplier_norm_upper(const DiscreteSymbolMatrix& M, std::optional<int> rank,
                                            int iters, std::uint64_t seed) {
  const CMatrix& m = M.entries();
  const int full = int(std::min(m.rows(), m.cols()));
  const int cap = rank.value_or(full);
  if (cap < 1) throw Error(ErrorCode::RankTooSmall, "factorization rank must be >= 1");
  if (iters < 1) throw Error(ErrorCode::InvalidArgument, "iters must be >= 1");

  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) {
    HaagerupFactorization zero;
    zero.rank = 1;
    zero.a_vecs = CMatrix::Zero(m.rows(), 1);
    zero.b_vecs = CMatrix::Zero(m.cols(), 1);
    return zero;
  }
  const RVector sv = singular_values(m);
  int numeric_rank = 0;
  while (numeric_rank < sv.size() && sv(numeric_rank) > kRankCut * sv(0)) ++numeric_rank;
  if (numeric_rank > cap) {
    throw Error(ErrorCode::RankTooSmall, "symbol matrix has rank " + std::to_string(numeric_rank) +
                                             " > requested " + std::to_string(cap));
  }

  AscentState state;
  // Uniform start: the first iterate is the plain SVD factorization.
  run_ascent(m, RVector::Constant(m.rows(), 1.0 / std::sqrt(double(m.rows()))),
             RVector::Constant(m.cols(), 1.0 / std::sqrt(double(m.cols()))), cap, iters, scale, state);
  // Seeded restart from random positive weights.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  RVector x(m.rows());
  RVector y(m.cols());
  for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = unif(rng);
  for (Eigen::Index k = 0; k < y.size(); ++k) y(k) = unif(rng);
  normalize_with_floor(x);
  normalize_with_floor(y);
  run_ascent(m, x, y, cap, iters, scale, state);

  if (state.best.rank == 0) {
    throw Error(ErrorCode::RankTooSmall, "no factorization reconstructed the symbol matrix");
  }
  state.best.dual_lower = state.best_lower;
  state.best.iterations = state.iterations;
  return state.best;
}

double multiplier_norm_lower(const DiscreteSymbolMatrix& M, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  const CMatrix& m = M.entries();
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  double best = 0.0;
  auto consider = [&](const CMatrix& r) {
    const double denom = operator_norm(r);
    if (denom > 0.0) best = std::max(best, operator_norm(m.cwiseProduct(r).eval()) / denom);
  };

  consider(CMatrix::Identity(rows, cols));
  consider(CMatrix::Ones(rows, cols));
  {
    CMatrix sign = CMatrix::Zero(rows, cols);
    for (Eigen::Index i = 0; i < cols; ++i) {
      for (Eigen::Index j = 0; j < rows; ++j) {
        const double mag = std::abs(m(j, i));
        if (mag > 0.0) sign(j, i) = std::conj(m(j, i)) / mag;
      }
    }
    consider(sign);
  }
  {
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector u = svd.matrixU().col(0).cwiseAbs();
    const RVector v = svd.matrixV().col(0).cwiseAbs();
    consider((u * v.transpose()).cast<Complex>());
  }
  {
    Eigen::Index jmax = 0;
    Eigen::Index imax = 0;
    m.cwiseAbs().maxCoeff(&jmax, &imax);
    CMatrix unit = CMatrix::Zero(rows, cols);
    unit(jmax, imax) = 1.0;
    consider(unit);
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix r(rows, cols);
  for (int t = 0; t < trials; ++t) {
    for (Eigen::Index i = 0; i < cols; ++i) {
      for (Eigen::Index j = 0; j < rows; ++j) r(j, i) = Complex(normal(rng), normal(rng));
    }
    consider(r);
  }
  return best;
}

Bracket bracket(const DiscreteSymbolMatrix& M, const BracketConfig& config) {
  const HaagerupFactorization upper = multiplier_norm_upper(M, config.rank, config.iters, config.seed);
  Bracket b;
  b.upper = upper.value;
  b.lower = std::max(multiplier_norm_lower(M, config.trials, config.seed), upper.dual_lower);
  b.gap = b.upper - b.lower;
  b.rank = upper.rank;
  return b;
}

}  // namespace doilab
