#include "doilab/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstring>
#include <numeric>
#include <vector>

namespace doilab {

HermitianMatrix::HermitianMatrix(const CMatrix& entries) {
  if (entries.rows() == 0 || entries.rows() != entries.cols()) {
    throw Error(ErrorCode::InvalidArgument, "Hermitian matrix must be square with dim >= 1");
  }
  if (!entries.allFinite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
  const double defect = hermitian_defect(entries);
  if (defect > kHermitianTol) {
    throw Error(ErrorCode::NotHermitian,
                "matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  m_ = 0.5 * (entries + entries.adjoint());
}

CommutingPair::CommutingPair(HermitianMatrix a1, HermitianMatrix a2, std::optional<double> comm_tol)
    : a1_(std::move(a1)), a2_(std::move(a2)) {
  if (a1_.dim() != a2_.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "commuting pair members differ in dimension");
  }
  comm_tol_ = comm_tol.value_or(
      1e-10 * std::max(1.0, operator_norm(a1_.matrix()) * operator_norm(a2_.matrix())));
  if (!(comm_tol_ >= 0.0)) throw Error(ErrorCode::InvalidArgument, "commTol must be >= 0");
  const double c = commutator_norm(a1_, a2_);
  if (c > comm_tol_) {
    throw Error(ErrorCode::NonCommuting, "commutator norm " + std::to_string(c) +
                                             " exceeds commTol " + std::to_string(comm_tol_));
  }
}

CommutingPair PlantedPair::pair() const {
  const CMatrix a1 = unitary * lambda1.cast<Complex>().asDiagonal() * unitary.adjoint();
  const CMatrix a2 = unitary * lambda2.cast<Complex>().asDiagonal() * unitary.adjoint();
  return CommutingPair(HermitianMatrix(0.5 * (a1 + a1.adjoint())),
                       HermitianMatrix(0.5 * (a2 + a2.adjoint())));
}

namespace {

std::uint64_t fnv1a(const CMatrix& m, std::uint64_t h) {
  const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
  const std::size_t len = std::size_t(m.size()) * sizeof(Complex);
  for (std::size_t k = 0; k < len; ++k) {
    h ^= bytes[k];
    h *= 0x100000001b3ULL;
  }
  return h;
}

double residual_of(const CommutingPair& pair, const CMatrix& u, const Eigen::MatrixX2d& pts) {
  const CMatrix r1 = u * pts.col(0).cast<Complex>().asDiagonal() * u.adjoint() - pair.first().matrix();
  const CMatrix r2 = u * pts.col(1).cast<Complex>().asDiagonal() * u.adjoint() - pair.second().matrix();
  return std::max(operator_norm(r1), operator_norm(r2));
}

// Joint eigenvalues as Rayleigh quotients of each column.
Eigen::MatrixX2d rayleigh_points(const CommutingPair& pair, const CMatrix& u) {
  Eigen::MatrixX2d pts(u.cols(), 2);
  const CMatrix h1 = u.adjoint() * pair.first().matrix() * u;
  const CMatrix h2 = u.adjoint() * pair.second().matrix() * u;
  for (Eigen::Index i = 0; i < u.cols(); ++i) {
    pts(i, 0) = h1(i, i).real();
    pts(i, 1) = h2(i, i).real();
  }
  return pts;
}

// Diagonalize A1, then A2 restricted to each A1 eigenvalue cluster.
CMatrix cluster_refine(const CommutingPair& pair) {
  const CMatrix& a1 = pair.first().matrix();
  const CMatrix& a2 = pair.second().matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a1);
  const RVector& ev = es.eigenvalues();
  CMatrix u = es.eigenvectors();
  const double threshold = 1e-8 * ev.cwiseAbs().maxCoeff();
  const Eigen::Index n = ev.size();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && ev(stop) - ev(stop - 1) <= threshold) ++stop;
    const Eigen::Index width = stop - start;
    if (width > 1) {
      const CMatrix block = u.middleCols(start, width);
      CMatrix restricted = block.adjoint() * a2 * block;
      restricted = 0.5 * (restricted + restricted.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<CMatrix> inner(restricted);
      u.middleCols(start, width) = block * inner.eigenvectors();
    }
    start = stop;
  }
  return u;
}

}  // namespace

JointSpectrum joint_diagonalize(const CommutingPair& pair, std::optional<double> tol) {
  const CMatrix& a1 = pair.first().matrix();
  const CMatrix& a2 = pair.second().matrix();
  const double n1 = operator_norm(a1);
  const double n2 = operator_norm(a2);
  const double bound = tol.value_or(1e-10 * std::max({1.0, n1, n2}));

  // Generic splitting: A1 + gamma A2 with gamma drawn from a hash of the input.
  std::mt19937_64 rng(fnv1a(a2, fnv1a(a1, 0xcbf29ce484222325ULL)));
  const double scale = n2 > 0.0 ? std::max(n1, 1.0) / n2 : 1.0;
  const double gamma = std::uniform_real_distribution<double>(0.5, 1.5)(rng) * scale;

  CMatrix u;
  {
    CMatrix h = a1 + gamma * a2;
    h = 0.5 * (h + h.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    u = es.eigenvectors();
  }
  Eigen::MatrixX2d pts = rayleigh_points(pair, u);
  double residual = residual_of(pair, u, pts);
  if (!(residual <= bound)) {
    u = cluster_refine(pair);
    pts = rayleigh_points(pair, u);
    residual = residual_of(pair, u, pts);
    if (!(residual <= bound)) {
      throw Error(ErrorCode::DegenerateResolutionFailure,
                  "joint diagonalization residual " + std::to_string(residual) +
                      " exceeds tolerance " + std::to_string(bound));
    }
  }

  // Lexicographic order on pairs rounded to 1e-9.
  const Eigen::Index n = pts.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto key = [&](Eigen::Index i, int c) { return std::round(pts(i, c) * 1e9); };
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
    if (key(l, 0) != key(r, 0)) return key(l, 0) < key(r, 0);
    return key(l, 1) < key(r, 1);
  });

  JointSpectrum out;
  out.basis.resize(n, n);
  out.points.resize(n, 2);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[std::size_t(k)];
    CVector col = u.col(src);
    // Phase convention: the largest-modulus component is real positive.
    Eigen::Index top = 0;
    col.cwiseAbs().maxCoeff(&top);
    col *= std::conj(col(top)) / std::abs(col(top));
    out.basis.col(k) = col;
    out.points.row(k) = pts.row(src);
  }
  out.reconstruction_residual = residual;
  return out;
}

CMatrix spectral_synthesis(const JointSpectrum& spec, const CVector& values) {
  if (values.size() != spec.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "spectral_synthesis: value count differs from dim");
  }
  return spec.basis * values.asDiagonal() * spec.basis.adjoint();
}

CMatrix functional_calculus(const JointSpectrum& spec, const Function2& f) {
  CVector values(spec.dim());
  for (Eigen::Index i = 0; i < spec.dim(); ++i) {
    const Complex v = f(spec.points(i, 0), spec.points(i, 1));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorCode::EvaluationFailure,
                  "function " + f.label + " is not finite at spectral point " + std::to_string(i));
    }
    values(i) = v;
  }
  // A function constant on the spectrum maps to an exact multiple of I.
  if ((values.array() == values(0)).all()) {
    return values(0) * CMatrix::Identity(spec.dim(), spec.dim());
  }
  return spectral_synthesis(spec, values);
}

CMatrix haar_unitary(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix z(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

PlantedPair random_planted_pair(Eigen::Index n, std::uint64_t seed, Interval range1, Interval range2) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  if (!(range1.lo <= range1.hi) || !(range2.lo <= range2.hi)) {
    throw Error(ErrorCode::InvalidArgument, "spectral ranges must be nonempty intervals");
  }
  std::mt19937_64 rng(seed);
  PlantedPair planted;
  planted.unitary = haar_unitary(n, rng);
  std::uniform_real_distribution<double> u1(range1.lo, range1.hi);
  std::uniform_real_distribution<double> u2(range2.lo, range2.hi);
  planted.lambda1.resize(n);
  planted.lambda2.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    planted.lambda1(i) = u1(rng);
    planted.lambda2(i) = u2(rng);
  }
  return planted;
}

CommutingPair random_commuting_pair(Eigen::Index n, std::uint64_t seed, Interval range1, Interval range2) {
  return random_planted_pair(n, seed, range1, range2).pair();
}

}  // namespace doilab
