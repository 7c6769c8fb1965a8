#ifndef DOILAB_TESTS_SUPPORT_HPP
#define DOILAB_TESTS_SUPPORT_HPP

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "doilab/linalg.hpp"
#include "doilab/spectral.hpp"

namespace testing {

using namespace doilab;

inline CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix g = gaussian_matrix(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

inline std::vector<std::pair<double, double>> sorted_pairs(const RVector& a, const RVector& b) {
  std::vector<std::pair<double, double>> out;
  for (Eigen::Index i = 0; i < a.size(); ++i) out.emplace_back(a(i), b(i));
  std::sort(out.begin(), out.end());
  return out;
}

inline CMatrix diag(std::initializer_list<double> v) {
  RVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) d(k++) = x;
  return d.cast<Complex>().asDiagonal();
}

// Pair of spectra from two independent planted pairs of the same size.
inline std::pair<JointSpectrum, JointSpectrum> random_spectra(Eigen::Index n, std::uint64_t seed,
                                                              Interval r = {-3.0, 3.0}) {
  const JointSpectrum a = joint_diagonalize(random_commuting_pair(n, seed, r, r));
  const JointSpectrum b = joint_diagonalize(random_commuting_pair(n, seed + 7919, r, r));
  return {a, b};
}

}  // namespace testing

#endif  // DOILAB_TESTS_SUPPORT_HPP
