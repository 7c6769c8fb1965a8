#include "doilab/besov.hpp"

#include <cmath>

#include "fft2.hpp"

namespace doilab {

FilterW::FilterW(double sharpness) : sharpness_(sharpness) {
  if (!(sharpness > 0.0) || !std::isfinite(sharpness)) {
    throw Error(ErrorCode::InvalidSharpness, "filter sharpness must be positive and finite");
  }
}

double FilterW::step(double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-sharpness_ / u);
  const double b = std::exp(-sharpness_ / (1.0 - u));
  return a / (a + b);
}

double FilterW::operator()(double t) const {
  if (!(t > 0.5) || !(t < 2.0)) return 0.0;
  if (t <= 1.0) return step(2.0 * t - 1.0);
  return 1.0 - step(t - 1.0);
}

FilterW build_w(double sharpness) { return FilterW(sharpness); }

FilterReport validate_filter(const FilterW& w) {
  FilterReport r;
  r.min_value = kInfinity;
  for (int k = 0; k < 1000; ++k) {
    const double t = std::pow(10.0, -6.0 + 12.0 * k / 999.0);
    double sum = 0.0;
    for (int n = -30; n <= 30; ++n) sum += w(std::ldexp(t, -n));
    r.partition_residual = std::max(r.partition_residual, std::abs(sum - 1.0));
    r.min_value = std::min(r.min_value, w(t));
    if (t <= 0.5 || t >= 2.0) r.support_residual = std::max(r.support_residual, std::abs(w(t)));
  }
  for (int k = 0; k < 200; ++k) {
    const double t = 1.0 + k / 199.0;
    r.consistency_residual = std::max(r.consistency_residual, std::abs(w(t) - (1.0 - w(t / 2.0))));
  }
  for (double t : {0.0, 0.25, 0.5, 2.0, 3.0, 100.0}) {
    r.support_residual = std::max(r.support_residual, std::abs(w(t)));
  }
  return r;
}

ScaleRange default_scale_range(const LpGrid& grid) {
  return {-10, int(std::floor(std::log2(grid.nyquist()))) - 1};
}

namespace {

void check_grid(const LpGrid& grid, ScaleRange range) {
  if (grid.N < 2 || (grid.N & (grid.N - 1)) != 0) {
    throw Error(ErrorCode::InvalidArgument, "grid N must be a power of two >= 2");
  }
  if (!(grid.L > 0.0) || !std::isfinite(grid.L)) {
    throw Error(ErrorCode::InvalidArgument, "grid extent L must be positive");
  }
  if (range.nmin > range.nmax) throw Error(ErrorCode::InvalidArgument, "nmin exceeds nmax");
}

// Signed FFT frequency index for position k.
inline int signed_index(int k, int n) { return k < n / 2 ? k : k - n; }

struct Spectrum {
  CMatrix coeffs;
  RVector xi;  // angular frequency per FFT index
};

Spectrum sampled_spectrum(const Function2& f, const LpGrid& grid) {
  const int n = grid.N;
  const double h = grid.L / n;
  Spectrum sp;
  sp.coeffs.resize(n, n);
  for (int j = 0; j < n; ++j) {
    const double t = -grid.L / 2.0 + j * h;
    for (int i = 0; i < n; ++i) sp.coeffs(i, j) = f(-grid.L / 2.0 + i * h, t);
  }
  if (!sp.coeffs.allFinite()) {
    throw Error(ErrorCode::EvaluationFailure, f.label + " is not finite on the Besov grid");
  }
  detail::fft2(sp.coeffs, false);
  sp.xi.resize(n);
  for (int k = 0; k < n; ++k) sp.xi(k) = 2.0 * std::numbers::pi * signed_index(k, n) / grid.L;

  // Resolution check: energy in the outer band means aliasing or a periodic
  // boundary jump, so the grid does not represent f.
  const double peak = sp.coeffs.cwiseAbs().maxCoeff();
  if (peak > 0.0) {
    const int edge = 3 * n / 8;
    double outer = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (std::max(std::abs(signed_index(i, n)), std::abs(signed_index(j, n))) >= edge) {
          outer = std::max(outer, std::abs(sp.coeffs(i, j)));
        }
      }
    }
    if (outer > 1e-3 * peak) {
      throw Error(ErrorCode::GridTooCoarse,
                  "grid does not resolve " + f.label + " (outer-band spectral ratio " +
                      std::to_string(outer / peak) + ")");
    }
  }
  return sp;
}

// Masked spectrum for scale n; returns false when the annulus holds no
// nonzero coefficient.
bool masked(const Spectrum& sp, const FilterW& w, int scale, CMatrix& out) {
  const Eigen::Index n = sp.coeffs.rows();
  const double inv = std::ldexp(1.0, -scale);
  out.resize(n, n);
  bool any = false;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = w(std::hypot(sp.xi(i), sp.xi(j)) * inv);
      out(i, j) = m * sp.coeffs(i, j);
      any = any || out(i, j) != Complex{};
    }
  }
  return any;
}

}  // namespace

std::map<int, CMatrix> lp_coefficients(const Function2& f, const LpGrid& grid, const FilterW& w,
                                       ScaleRange range) {
  check_grid(grid, range);
  const Spectrum sp = sampled_spectrum(f, grid);
  std::map<int, CMatrix> out;
  for (int n = range.nmin; n <= range.nmax; ++n) {
    CMatrix piece;
    if (masked(sp, w, n, piece)) {
      detail::fft2(piece, true);
    } else {
      piece = CMatrix::Zero(grid.N, grid.N);
    }
    out.emplace(n, std::move(piece));
  }
  return out;
}

BesovEstimate besov_norm_estimate(const Function2& f, const LpGrid& grid, const FilterW& w,
                                  ScaleRange range) {
  check_grid(grid, range);
  const Spectrum sp = sampled_spectrum(f, grid);
  BesovEstimate est;
  est.range = range;
  est.grid = grid;

  CMatrix coverage_error = sp.coeffs;  // spectrum of sum f_n - (f - mean)
  coverage_error(0, 0) = 0.0;
  CMatrix piece;
  for (int scale = range.nmin; scale <= range.nmax; ++scale) {
    double sup = 0.0;
    if (masked(sp, w, scale, piece)) {
      coverage_error -= piece;
      detail::fft2(piece, true);
      sup = piece.cwiseAbs().maxCoeff();
    }
    est.per_scale[scale] = sup;
    est.total += std::ldexp(sup, scale);
  }
  if (coverage_error.cwiseAbs().maxCoeff() > 0.0) {
    detail::fft2(coverage_error, true);
    est.leakage = coverage_error.cwiseAbs().maxCoeff();
  }
  return est;
}

std::map<int, double> derivative_scale_norms(const Function2& f, const LpGrid& grid,
                                             const FilterW& w, ScaleRange range, int axis) {
  check_grid(grid, range);
  if (axis != 0 && axis != 1) throw Error(ErrorCode::InvalidArgument, "axis must be 0 or 1");
  const Spectrum sp = sampled_spectrum(f, grid);
  std::map<int, double> out;
  CMatrix piece;
  for (int scale = range.nmin; scale <= range.nmax; ++scale) {
    double sup = 0.0;
    if (masked(sp, w, scale, piece)) {
      for (Eigen::Index j = 0; j < piece.cols(); ++j) {
        for (Eigen::Index i = 0; i < piece.rows(); ++i) {
          piece(i, j) *= kI * (axis == 0 ? sp.xi(i) : sp.xi(j));
        }
      }
      detail::fft2(piece, true);
      sup = piece.cwiseAbs().maxCoeff();
    }
    out[scale] = sup;
  }
  return out;
}

double besov_norm_exponential(double a, double b, const FilterW& w) {
  const double radius = std::hypot(a, b);
  if (radius == 0.0) throw Error(ErrorCode::ZeroFrequency, "exponential with zero frequency");
  int k = int(std::floor(std::log2(radius)));
  double r = std::ldexp(radius, -k);
  // Guard log2 rounding so r lands in [1, 2).
  if (r >= 2.0) {
    ++k;
    r = std::ldexp(radius, -k);
  } else if (r < 1.0) {
    --k;
    r = std::ldexp(radius, -k);
  }
  return std::ldexp(2.0, k) - std::ldexp(w(r), k);
}

}  // namespace doilab
