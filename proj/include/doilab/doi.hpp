#ifndef DOILAB_DOI_HPP
#define DOILAB_DOI_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "doilab/function2.hpp"
#include "doilab/spectral.hpp"

namespace doilab {

/// DOI weight Phi(x, y). Throughout the library x is a point of the RIGHT
/// measure (E_A) and y a point of the LEFT measure (E_B):
///   DOI = sum_{j,i} Phi(x_i, y_j) dE_B(y_j) Q dE_A(x_i).
struct Symbol {
  std::function<Complex(const Point2& x, const Point2& y)> eval;
  std::string description;

  Complex operator()(const Point2& x, const Point2& y) const { return eval(x, y); }
};

/// M(j, i) = Phi(x_i, y_j) with x_i from specA and y_j from specB.
CMatrix symbol_matrix(const Symbol& phi, const JointSpectrum& specA, const JointSpectrum& specB);

/// Double operator integral over the two finite atomic joint spectra:
/// Hadamard multiplication by the symbol matrix in the mixed eigenbasis,
/// R = V (M o (V* Q U)) U*.
CMatrix doi_evaluate(const JointSpectrum& specB, const JointSpectrum& specA, const Symbol& phi,
                     const CMatrix& Q);

/// Same as doi_evaluate with the sampled symbol matrix supplied directly.
CMatrix doi_apply(const JointSpectrum& specB, const JointSpectrum& specA, const CMatrix& symbol,
                  const CMatrix& Q);

/// One term phi_n(x) psi_n(y) of a separable symbol.
struct SeparableTerm {
  Function2 phi;  // right (A) side
  Function2 psi;  // left (B) side
};

/// sum_n psi_n(B1,B2) Q phi_n(A1,A2).
CMatrix doi_via_factorization(const JointSpectrum& specB, const JointSpectrum& specA,
                              const std::vector<SeparableTerm>& factors, const CMatrix& Q);

/// The symbol (x, y) -> sum_n phi_n(x) psi_n(y).
Symbol assemble_symbol(const std::vector<SeparableTerm>& factors);

/// ||Phi||_inf ||Q||_S2 - ||DOI||_S2, the sup taken over the product spectrum.
double hs_inequality_slack(const JointSpectrum& specB, const JointSpectrum& specA, const Symbol& phi,
                           const CMatrix& Q);

}  // namespace doilab

#endif  // DOILAB_DOI_HPP
