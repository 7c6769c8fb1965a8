#include "doilab/doi.hpp"

namespace doilab {

CMatrix symbol_matrix(const Symbol& phi, const JointSpectrum& specA, const JointSpectrum& specB) {
  CMatrix m(specB.dim(), specA.dim());
  for (Eigen::Index i = 0; i < specA.dim(); ++i) {
    const Point2 x = specA.point(i);
    for (Eigen::Index j = 0; j < specB.dim(); ++j) {
      const Complex v = phi(x, specB.point(j));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw Error(ErrorCode::SymbolEvaluationFailure,
                    "symbol " + phi.description + " is not finite at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
      }
      m(j, i) = v;
    }
  }
  return m;
}

CMatrix doi_apply(const JointSpectrum& specB, const JointSpectrum& specA, const CMatrix& symbol,
                  const CMatrix& Q) {
  if (Q.rows() != specB.dim() || Q.cols() != specA.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "DOI operand must be dim(B) x dim(A)");
  }
  if (symbol.rows() != specB.dim() || symbol.cols() != specA.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "symbol matrix must be dim(B) x dim(A)");
  }
  const CMatrix mixed = specB.basis.adjoint() * Q * specA.basis;
  return specB.basis * symbol.cwiseProduct(mixed) * specA.basis.adjoint();
}

CMatrix doi_evaluate(const JointSpectrum& specB, const JointSpectrum& specA, const Symbol& phi,
                     const CMatrix& Q) {
  if (Q.rows() != specB.dim() || Q.cols() != specA.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "DOI operand must be dim(B) x dim(A)");
  }
  return doi_apply(specB, specA, symbol_matrix(phi, specA, specB), Q);
}

CMatrix doi_via_factorization(const JointSpectrum& specB, const JointSpectrum& specA,
                              const std::vector<SeparableTerm>& factors, const CMatrix& Q) {
  if (Q.rows() != specB.dim() || Q.cols() != specA.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "DOI operand must be dim(B) x dim(A)");
  }
  CMatrix acc = CMatrix::Zero(Q.rows(), Q.cols());
  for (const auto& term : factors) {
    acc += functional_calculus(specB, term.psi) * Q * functional_calculus(specA, term.phi);
  }
  return acc;
}

Symbol assemble_symbol(const std::vector<SeparableTerm>& factors) {
  std::string description;
  for (const auto& term : factors) {
    if (!description.empty()) description += " + ";
    description += "[" + term.phi.label + "](x)[" + term.psi.label + "](y)";
  }
  return {[factors](const Point2& x, const Point2& y) {
            Complex acc{};
            for (const auto& term : factors) acc += term.phi(x(0), x(1)) * term.psi(y(0), y(1));
            return acc;
          },
          description.empty() ? "0" : description};
}

double hs_inequality_slack(const JointSpectrum& specB, const JointSpectrum& specA, const Symbol& phi,
                           const CMatrix& Q) {
  const CMatrix m = symbol_matrix(phi, specA, specB);
  const CMatrix r = doi_apply(specB, specA, m, Q);
  return m.cwiseAbs().maxCoeff() * Q.norm() - r.norm();
}

}  // namespace doilab
