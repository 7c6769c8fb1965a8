#ifndef DOILAB_LINALG_HPP
#define DOILAB_LINALG_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "doilab/error.hpp"

namespace doilab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Point2 = Eigen::Vector2d;

inline constexpr Complex kI{0.0, 1.0};

/// Sentinel for the operator (Schatten-infinity) norm.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

template <typename Derived>
RVector singular_values(const Eigen::MatrixBase<Derived>& x) {
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (x.size() == 0) return RVector();
  if (std::min(x.rows(), x.cols()) > 64) {
    Eigen::BDCSVD<Plain> svd(x.eval());
    return svd.singularValues().template cast<double>();
  }
  Eigen::JacobiSVD<Plain> svd(x.eval());
  return svd.singularValues().template cast<double>();
}

template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& x) {
  if (x.size() == 0) return 0.0;
  return singular_values(x)(0);
}

/// (sum sigma_k^p)^(1/p); p == kInfinity gives the largest singular value.
template <typename Derived>
double schatten_norm(const Eigen::MatrixBase<Derived>& x, double p) {
  if (!(p >= 1.0)) {
    throw Error(ErrorCode::InvalidP, "Schatten exponent must satisfy p >= 1");
  }
  const RVector s = singular_values(x);
  if (s.size() == 0) return 0.0;
  const double top = s(0);
  if (std::isinf(p) || top == 0.0) return top;
  if (p == 1.0) return s.sum();
  if (p == 2.0) return s.norm();
  // Scale by the largest value so large p cannot overflow.
  double acc = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) acc += std::pow(s(k) / top, p);
  return top * std::pow(acc, 1.0 / p);
}

template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& x) {
  return (x - x.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace doilab

#endif  // DOILAB_LINALG_HPP
