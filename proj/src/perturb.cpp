#include "doilab/perturb.hpp"

#include <Eigen/Eigenvalues>

#include <random>

namespace doilab {

IdentityTerms identity_terms(const JointSpectrum& specA, const JointSpectrum& specB, const CMatrix& a1,
                             const CMatrix& a2, const CMatrix& b1, const CMatrix& b2,
                             const Function2& f) {
  IdentityTerms t;
  t.lhs = functional_calculus(specB, f) - functional_calculus(specA, f);
  t.term2 = doi_evaluate(specB, specA, divided_diff_symbol_var2(f), resolvent_product(a2, b2));
  t.term1 = doi_evaluate(specB, specA, divided_diff_symbol_var1(f), resolvent_product(a1, b1));
  return t;
}

IdentityReport summarize_identity(const IdentityTerms& terms, double tol) {
  IdentityReport r;
  const CMatrix rhs = terms.term2 + terms.term1;
  r.lhsNorm = operator_norm(terms.lhs);
  r.rhsNorm = operator_norm(rhs);
  r.absResidual = operator_norm((terms.lhs - rhs).eval());
  r.relResidual = r.absResidual / std::max(r.lhsNorm, 1e-300);
  r.termNorms = {operator_norm(terms.term2), operator_norm(terms.term1)};
  r.pass = r.relResidual <= tol;
  return r;
}

IdentityReport verify_identity(const CommutingPair& pairA, const CommutingPair& pairB, const Function2& f,
                               double tol) {
  if (pairA.dim() != pairB.dim()) throw Error(ErrorCode::DimensionMismatch, "pairs differ in dimension");
  const JointSpectrum specA = joint_diagonalize(pairA);
  const JointSpectrum specB = joint_diagonalize(pairB);
  return summarize_identity(identity_terms(specA, specB, pairA.first().matrix(), pairA.second().matrix(),
                                           pairB.first().matrix(), pairB.second().matrix(), f),
                            tol);
}

WeightedBesov weighted_besov(const Function2& f, const BesovConfig& config) {
  const FilterW w = build_w(config.sharpness);
  return {besov_norm_estimate(weighted_by_first(f), config.grid, w, config.range),
          besov_norm_estimate(weighted_by_second(f), config.grid, w, config.range)};
}

namespace {

double guarded_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  return num / den;
}

}  // namespace

BoundReport bound_ratio(const CommutingPair& pairA, const CommutingPair& pairB, const Function2& f,
                        double besovG1, double besovG2, const LpGrid& grid) {
  if (pairA.dim() != pairB.dim()) throw Error(ErrorCode::DimensionMismatch, "pairs differ in dimension");
  const JointSpectrum specA = joint_diagonalize(pairA);
  const JointSpectrum specB = joint_diagonalize(pairB);
  BoundReport r;
  r.grid = grid;
  r.deviationNorm = operator_norm((functional_calculus(specB, f) - functional_calculus(specA, f)).eval());
  r.factors = {relative_bound_factor(pairA.first(), pairB.first()),
               relative_bound_factor(pairA.second(), pairB.second())};
  r.besovG1 = besovG1;
  r.besovG2 = besovG2;
  const double factor = std::max(r.factors[0], r.factors[1]);
  r.ratio = guarded_ratio(r.deviationNorm, (besovG1 + besovG2) * factor);
  r.ratioMaxNorm = guarded_ratio(r.deviationNorm, std::max(besovG1, besovG2) * factor);
  return r;
}

BoundReport bound_ratio(const CommutingPair& pairA, const CommutingPair& pairB, const Function2& f,
                        const BesovConfig& config) {
  const WeightedBesov g = weighted_besov(f, config);
  return bound_ratio(pairA, pairB, f, g.g1.total, g.g2.total, config.grid);
}

SchattenReport schatten_ratio(const CommutingPair& pairA, const CommutingPair& pairB, const Function2& f,
                              double p) {
  if (!(p >= 1.0) || std::isinf(p)) throw Error(ErrorCode::InvalidP, "Schatten ratio needs p in [1, inf)");
  if (pairA.dim() != pairB.dim()) throw Error(ErrorCode::DimensionMismatch, "pairs differ in dimension");
  const JointSpectrum specA = joint_diagonalize(pairA);
  const JointSpectrum specB = joint_diagonalize(pairB);
  const CMatrix& a1 = pairA.first().matrix();
  const CMatrix& a2 = pairA.second().matrix();
  const CMatrix& b1 = pairB.first().matrix();
  const CMatrix& b2 = pairB.second().matrix();

  SchattenReport r;
  r.p = p;
  r.numerator = schatten_norm((functional_calculus(specB, f) - functional_calculus(specA, f)).eval(), p);
  r.denominator = std::max(schatten_norm((b1 - a1).eval(), p), schatten_norm((b2 - a2).eval(), p));
  r.hypothesis = {schatten_norm(resolvent_product(a1, b1), p), schatten_norm(resolvent_product(a2, b2), p)};
  if (r.denominator == 0.0) {
    r.zeroPerturbationViolation = r.numerator != 0.0;
    r.ratio = r.zeroPerturbationViolation ? kInfinity : 0.0;
  } else {
    r.ratio = r.numerator / r.denominator;
  }
  return r;
}

std::vector<CounterexampleRow> counterexample_scan(const std::vector<int>& nList) {
  if (nList.empty()) throw Error(ErrorCode::InvalidArgument, "counterexample scan needs at least one n");
  std::vector<CounterexampleRow> rows;
  for (int n : nList) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "counterexample n must be >= 1");
    // Diagonals of A = diag(1..n), N = iA, M = A + iA.
    const RVector a = RVector::LinSpaced(n, 1.0, double(n));
    const CVector nDiag = kI * a.cast<Complex>();
    const CVector mDiag = a.cast<Complex>() + kI * a.cast<Complex>();
    const CVector reN = CVector::Zero(n);
    const CVector reM = a.cast<Complex>();

    CounterexampleRow row;
    row.n = n;
    // Diagonal operators: the operator norm is the largest modulus.
    row.fullFactor = ((mDiag - nDiag).array() / (nDiag.array() + kI)).abs().maxCoeff();
    row.reFactor = ((reM - reN).array() / (reN.array() + kI)).abs().maxCoeff();
    rows.push_back(row);
  }
  return rows;
}

namespace {

// Rows of `spec` whose both coordinates lie in [-cutoff, cutoff].
std::vector<Eigen::Index> inside(const JointSpectrum& spec, double cutoff) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < spec.dim(); ++i) {
    if (std::abs(spec.points(i, 0)) <= cutoff && std::abs(spec.points(i, 1)) <= cutoff) idx.push_back(i);
  }
  return idx;
}

CMatrix projection(const JointSpectrum& spec, const std::vector<Eigen::Index>& idx) {
  const Eigen::Index n = spec.dim();
  if (Eigen::Index(idx.size()) == n) return CMatrix::Identity(n, n);
  CMatrix p = CMatrix::Zero(n, n);
  for (Eigen::Index i : idx) p += spec.basis.col(i) * spec.basis.col(i).adjoint();
  return p;
}

JointSpectrum truncated(const JointSpectrum& spec, const std::vector<Eigen::Index>& idx) {
  JointSpectrum out = spec;
  out.points.setZero();
  for (Eigen::Index i : idx) out.points.row(i) = spec.points.row(i);
  return out;
}

CMatrix synth(const JointSpectrum& spec, int coord) {
  return spectral_synthesis(spec, spec.points.col(coord).cast<Complex>());
}

}  // namespace

std::vector<TruncationRow> truncation_convergence(const CommutingPair& pairA, const CommutingPair& pairB,
                                                  const Function2& f, const std::vector<double>& cutoffs) {
  if (pairA.dim() != pairB.dim()) throw Error(ErrorCode::DimensionMismatch, "pairs differ in dimension");
  const JointSpectrum specA = joint_diagonalize(pairA);
  const JointSpectrum specB = joint_diagonalize(pairB);
  const IdentityTerms full = identity_terms(specA, specB, pairA.first().matrix(), pairA.second().matrix(),
                                            pairB.first().matrix(), pairB.second().matrix(), f);
  const CMatrix rhs = full.term2 + full.term1;
  const double lhsNorm = std::max(operator_norm(full.lhs), 1e-300);

  std::vector<TruncationRow> rows;
  for (double cutoff : cutoffs) {
    const auto idxB = inside(specB, cutoff);
    const auto idxA = inside(specA, cutoff);
    const CMatrix p = projection(specB, idxB);
    const CMatrix q = projection(specA, idxA);

    TruncationRow row;
    row.cutoff = cutoff;
    row.rankP = int(idxB.size());
    row.rankQ = int(idxA.size());
    row.compressedResidual = operator_norm((p * (rhs - full.lhs) * q).eval());
    row.compressedRelResidual = row.compressedResidual / lhsNorm;
    row.truncationGap = operator_norm((p * rhs * q - rhs).eval());

    const JointSpectrum tA = truncated(specA, idxA);
    const JointSpectrum tB = truncated(specB, idxB);
    const IdentityTerms t = identity_terms(tA, tB, synth(tA, 0), synth(tA, 1), synth(tB, 0), synth(tB, 1), f);
    row.truncatedIdentityResidual = summarize_identity(t, kInfinity).relResidual;
    rows.push_back(row);
  }
  return rows;
}

PlantedPair perturb_planted(const PlantedPair& base, double scale, std::uint64_t seed) {
  if (!(scale >= 0.0)) throw Error(ErrorCode::InvalidArgument, "perturbScale must be >= 0");
  const Eigen::Index n = base.unitary.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix h(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    h(j, j) = normal(rng);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      h(i, j) = Complex(normal(rng), normal(rng)) / std::sqrt(2.0);
      h(j, i) = std::conj(h(i, j));
    }
  }
  h /= std::sqrt(double(n));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  RVector d1(n);
  RVector d2(n);
  for (Eigen::Index i = 0; i < n; ++i) d1(i) = unit(rng);
  for (Eigen::Index i = 0; i < n; ++i) d2(i) = unit(rng);

  PlantedPair out;
  if (scale == 0.0) {
    out.unitary = base.unitary;
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const CVector phases = (kI * scale * es.eigenvalues().cast<Complex>()).array().exp();
    const CMatrix v = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    out.unitary = v * base.unitary;
  }
  out.lambda1 = base.lambda1 + scale * d1;
  out.lambda2 = base.lambda2 + scale * d2;
  return out;
}

}  // namespace doilab
