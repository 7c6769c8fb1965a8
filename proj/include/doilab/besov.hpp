#ifndef DOILAB_BESOV_HPP
#define DOILAB_BESOV_HPP

#include <map>
#include <numbers>

#include "doilab/function2.hpp"
#include "doilab/linalg.hpp"

namespace doilab {

/// Dyadic Littlewood-Paley profile w on (0, inf):
///   w >= 0, supp w in [1/2, 2], w(t) = 1 - w(t/2) on [1, 2].
/// Built from the smooth step rho(u) = sigma(u) / (sigma(u) + sigma(1-u)),
/// sigma(u) = exp(-k/u) for u > 0; w(t) = rho(2t-1) on [1/2,1] and
/// 1 - rho(t-1) on [1,2].
class FilterW {
 public:
  explicit FilterW(double sharpness);

  double operator()(double t) const;
  double sharpness() const { return sharpness_; }

 private:
  double step(double u) const;

  double sharpness_;
};

FilterW build_w(double sharpness = 1.0);

struct FilterReport {
  double partition_residual = 0.0;    // max |sum_n w(t/2^n) - 1|, 1000 log-spaced t
  double consistency_residual = 0.0;  // max |w(t) + w(t/2) - 1|, 200 t in [1,2]
  double min_value = 0.0;
  double support_residual = 0.0;      // max |w| outside (1/2, 2)
  bool ok() const {
    return partition_residual <= 1e-10 && consistency_residual <= 1e-10 && min_value >= 0.0 &&
           support_residual <= 1e-12;
  }
};

FilterReport validate_filter(const FilterW& w);

/// Periodic sampling grid [-L/2, L/2)^2 with N points per axis.
struct LpGrid {
  double L = 16.0 * std::numbers::pi;
  int N = 512;

  double nyquist() const { return std::numbers::pi * N / L; }
};

struct ScaleRange {
  int nmin = -10;
  int nmax = 4;
};

/// n in [-10, floor(log2(Nyquist)) - 1].
ScaleRange default_scale_range(const LpGrid& grid);

struct BesovEstimate {
  ScaleRange range;
  std::map<int, double> per_scale;  // n -> ||f_n||_inf
  double total = 0.0;               // sum 2^n ||f_n||_inf
  LpGrid grid;
  double leakage = 0.0;             // ||sum f_n - (f - mean f)||_inf on the grid
};

/// f_n = f * W_n on the grid, realized by multiplying the DFT of the samples
/// by w(|xi| / 2^n). Keys are n in range; values are N x N sample arrays.
std::map<int, CMatrix> lp_coefficients(const Function2& f, const LpGrid& grid, const FilterW& w,
                                       ScaleRange range);

BesovEstimate besov_norm_estimate(const Function2& f, const LpGrid& grid, const FilterW& w,
                                  ScaleRange range);

/// ||d f_n / d x_axis||_inf per scale (axis 0 = s, 1 = t).
std::map<int, double> derivative_scale_norms(const Function2& f, const LpGrid& grid,
                                             const FilterW& w, ScaleRange range, int axis);

/// Exact value for f = e^{i(as+bt)}: with |(a,b)| = 2^k r, r in [1,2),
/// the norm is 2^{k+1} - 2^k w(r).
double besov_norm_exponential(double a, double b, const FilterW& w);

}  // namespace doilab

#endif  // DOILAB_BESOV_HPP
