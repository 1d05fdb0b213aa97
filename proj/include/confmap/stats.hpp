#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace confmap {

// Discrete probability toolkit for paired image patches.
//
// Every distribution here is a histogram of n quantized samples, so all
// masses and cumulative values are rationals with denominator n, and the
// Frechet bounds, boundary PMFs, Hoeffding covariances and sample moments
// are rationals with denominator n or n^2. Carrying the integer numerators
// alongside the double views keeps the algebraic identities between those
// quantities (F^L <= F^U, sigma^L <= sigma_xy <= sigma^U, rho attaining its
// bound for comonotone data) exact instead of merely approximate.

/// Marginal PMF over quantization bins 0..bins-1, estimated from n samples.
struct Pmf {
  int bins = 0;
  std::int64_t samples = 0;
  std::vector<std::int64_t> counts;
  std::vector<double> mass;  // counts[k] / samples
};

/// Marginal CDF: cum[k] = P(X <= k).
struct Cdf {
  int bins = 0;
  std::int64_t samples = 0;
  std::vector<std::int64_t> cum_counts;
  std::vector<double> cum;
};

/// Frechet-Hoeffding bounds of the joint CDF for a pair of marginals:
///   upper(x,y) = min(F_X(x), F_Y(y))
///   lower(x,y) = max(F_X(x) + F_Y(y) - 1, 0)
/// Grids are stored as integer counts over `samples`, row-major with the
/// source bin as the row index.
struct JointCdfBounds {
  int bins = 0;
  std::int64_t samples = 0;
  std::vector<std::int64_t> lower_counts;
  std::vector<std::int64_t> upper_counts;

  double lower(int x, int y) const {
    return static_cast<double>(lower_counts[static_cast<std::size_t>(x) * bins + y]) / samples;
  }
  double upper(int x, int y) const {
    return static_cast<double>(upper_counts[static_cast<std::size_t>(x) * bins + y]) / samples;
  }
  std::vector<double> lower_grid() const {
    std::vector<double> g(lower_counts.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      g[i] = static_cast<double>(lower_counts[i]) / samples;
    return g;
  }
  std::vector<double> upper_grid() const {
    std::vector<double> g(upper_counts.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      g[i] = static_cast<double>(upper_counts[i]) / samples;
    return g;
  }
};

enum class Bound { lower, upper };

/// Joint PMF over bins x bins cells, mass[x*bins + y].
struct JointPmf {
  int bins = 0;
  std::vector<double> mass;

  double at(int x, int y) const {
    return mass[static_cast<std::size_t>(x) * bins + y];
  }
};

/// Empirical correlation together with its Frechet bounds.
/// degenerate is set when either patch has zero variance; all correlations
/// are then defined as 0 and the joint model falls back to independence.
struct CorrelationBand {
  double rho = 0.0;
  double rho_lower = 0.0;
  double rho_upper = 0.0;
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  double sigma_lower = 0.0;
  double sigma_upper = 0.0;
  bool degenerate = false;
};

namespace detail {

inline void check_bins(int a, int b, const char* what) {
  if (a != b)
    throw std::invalid_argument(std::string(what) + ": bin count mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
}

inline void quantize_into(std::span<const float> values, int bins,
                          std::vector<int>& out) {
  if (bins < 2) throw std::invalid_argument("quantize: bins must be >= 2");
  out.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    int k = static_cast<int>(std::floor(static_cast<double>(values[i]) * bins));
    if (k < 0) k = 0;
    if (k > bins - 1) k = bins - 1;
    out[i] = k;
  }
}

inline void estimate_pmf_into(std::span<const int> idx, int bins, Pmf& out) {
  if (bins < 2) throw std::invalid_argument("estimate_pmf: bins must be >= 2");
  if (idx.empty()) throw std::invalid_argument("estimate_pmf: empty sample vector");
  out.bins = bins;
  out.samples = static_cast<std::int64_t>(idx.size());
  out.counts.assign(bins, 0);
  for (int k : idx) {
    if (k < 0 || k >= bins)
      throw std::invalid_argument("estimate_pmf: bin index out of range");
    ++out.counts[k];
  }
  out.mass.resize(bins);
  for (int k = 0; k < bins; ++k)
    out.mass[k] = static_cast<double>(out.counts[k]) / out.samples;
}

inline void cdf_into(const Pmf& p, Cdf& out) {
  out.bins = p.bins;
  out.samples = p.samples;
  out.cum_counts.resize(p.bins);
  out.cum.resize(p.bins);
  std::int64_t acc = 0;
  for (int k = 0; k < p.bins; ++k) {
    acc += p.counts[k];
    out.cum_counts[k] = acc;
    out.cum[k] = static_cast<double>(acc) / p.samples;
  }
}

inline void frechet_bounds_into(const Cdf& fx, const Cdf& fy,
                                JointCdfBounds& out) {
  check_bins(fx.bins, fy.bins, "frechet_bounds");
  if (fx.samples != fy.samples)
    throw std::invalid_argument("frechet_bounds: sample count mismatch");
  const int B = fx.bins;
  const std::int64_t n = fx.samples;
  out.bins = B;
  out.samples = n;
  out.lower_counts.resize(static_cast<std::size_t>(B) * B);
  out.upper_counts.resize(static_cast<std::size_t>(B) * B);
  for (int x = 0; x < B; ++x) {
    const std::int64_t cx = fx.cum_counts[x];
    for (int y = 0; y < B; ++y) {
      const std::int64_t cy = fy.cum_counts[y];
      const std::size_t i = static_cast<std::size_t>(x) * B + y;
      out.upper_counts[i] = cx < cy ? cx : cy;
      const std::int64_t l = cx + cy - n;
      out.lower_counts[i] = l > 0 ? l : 0;
    }
  }
}

/// 2-D finite differencing of a boundary CDF. On the integer count grids the
/// differences are exact and provably nonnegative, so no clamping or
/// renormalization is required; the result carries the original marginals
/// by telescoping.
inline void boundary_pmf_into(const JointCdfBounds& bounds, Bound which,
                              JointPmf& out) {
  const int B = bounds.bins;
  const std::int64_t n = bounds.samples;
  const auto& grid =
      which == Bound::upper ? bounds.upper_counts : bounds.lower_counts;
  out.bins = B;
  out.mass.resize(static_cast<std::size_t>(B) * B);
  for (int x = 0; x < B; ++x) {
    for (int y = 0; y < B; ++y) {
      const std::size_t i = static_cast<std::size_t>(x) * B + y;
      std::int64_t m = grid[i];
      if (x > 0) m -= grid[i - B];
      if (y > 0) m -= grid[i - 1];
      if (x > 0 && y > 0) m += grid[i - B - 1];
      if (m < 0)
        throw std::logic_error("boundary_pmf: negative mass from differencing");
      out.mass[i] = static_cast<double>(m) / n;
    }
  }
}

/// Integer numerator of the boundary covariance over samples^2:
///   sum_xy (n * F_bound_counts(x,y) - cum_x(x) * cum_y(y)).
inline std::int64_t boundary_covariance_numerator(const JointCdfBounds& bounds,
                                                  const Cdf& fx, const Cdf& fy,
                                                  Bound which) {
  const int B = bounds.bins;
  const std::int64_t n = bounds.samples;
  const auto& grid =
      which == Bound::upper ? bounds.upper_counts : bounds.lower_counts;
  std::int64_t acc = 0;
  for (int x = 0; x < B; ++x) {
    const std::int64_t cx = fx.cum_counts[x];
    for (int y = 0; y < B; ++y)
      acc += n * grid[static_cast<std::size_t>(x) * B + y] - cx * fy.cum_counts[y];
  }
  return acc;
}

struct SampleMoments {
  std::int64_t n = 0;
  std::int64_t var_x_num = 0;  // n * sum(x^2) - sum(x)^2, i.e. n^2 * var
  std::int64_t var_y_num = 0;
  std::int64_t cov_num = 0;  // n * sum(xy) - sum(x) * sum(y)
};

inline SampleMoments sample_moments(std::span<const int> xs,
                                    std::span<const int> ys) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("correlation_band: length mismatch");
  if (xs.empty()) throw std::invalid_argument("correlation_band: empty vectors");
  std::int64_t sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::int64_t x = xs[i], y = ys[i];
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  SampleMoments m;
  m.n = static_cast<std::int64_t>(xs.size());
  m.var_x_num = m.n * sxx - sx * sx;
  m.var_y_num = m.n * syy - sy * sy;
  m.cov_num = m.n * sxy - sx * sy;
  return m;
}

inline void band_into(std::span<const int> xs, std::span<const int> ys,
                      const Cdf& fx, const Cdf& fy,
                      const JointCdfBounds& bounds, CorrelationBand& out) {
  check_bins(fx.bins, bounds.bins, "correlation_band");
  check_bins(fy.bins, bounds.bins, "correlation_band");
  const SampleMoments m = sample_moments(xs, ys);
  if (m.n != bounds.samples)
    throw std::invalid_argument("correlation_band: sample count mismatch");
  const double n = static_cast<double>(m.n);
  out = CorrelationBand{};
  out.sigma_x = std::sqrt(static_cast<double>(m.var_x_num)) / n;
  out.sigma_y = std::sqrt(static_cast<double>(m.var_y_num)) / n;

  const std::int64_t upper_num =
      boundary_covariance_numerator(bounds, fx, fy, Bound::upper);
  const std::int64_t lower_num =
      boundary_covariance_numerator(bounds, fx, fy, Bound::lower);
  out.sigma_upper = static_cast<double>(upper_num) / (n * n);
  out.sigma_lower = static_cast<double>(lower_num) / (n * n);

  if (m.var_x_num == 0 || m.var_y_num == 0) {
    out.degenerate = true;
    return;
  }
  // Clamp the sample covariance into [sigma^L, sigma^U] on the integer
  // numerators. Exact arithmetic guarantees the band contains it; the clamp
  // also pins comonotone data to the bound itself.
  std::int64_t cov = m.cov_num;
  if (cov < lower_num) cov = lower_num;
  if (cov > upper_num) cov = upper_num;
  const double denom = std::sqrt(static_cast<double>(m.var_x_num)) *
                       std::sqrt(static_cast<double>(m.var_y_num));
  out.rho = static_cast<double>(cov) / denom;
  out.rho_lower = static_cast<double>(lower_num) / denom;
  out.rho_upper = static_cast<double>(upper_num) / denom;
}

/// Joint PMF mixture between a boundary coupling and the independence
/// product, weighted by how much of the attainable correlation the data
/// realizes:
///   rho > 0:  (rho/rho^U) f^U + (1 - rho/rho^U) f_X f_Y
///   rho <= 0: (rho/rho^L) f^L + (1 - rho/rho^L) f_X f_Y
inline void mixture_into(const CorrelationBand& band, const JointPmf& f_upper,
                         const JointPmf& f_lower, const Pmf& fx, const Pmf& fy,
                         JointPmf& out) {
  check_bins(fx.bins, fy.bins, "joint_pmf_model");
  check_bins(fx.bins, f_upper.bins, "joint_pmf_model");
  check_bins(fx.bins, f_lower.bins, "joint_pmf_model");
  const int B = fx.bins;
  out.bins = B;
  out.mass.resize(static_cast<std::size_t>(B) * B);

  double w = 0.0;
  const JointPmf* extreme = nullptr;
  if (!band.degenerate && band.rho > 0.0) {
    if (!(band.rho_upper > 0.0))
      throw std::logic_error("joint_pmf_model: rho > 0 with rho_upper <= 0");
    w = band.rho / band.rho_upper;
    extreme = &f_upper;
  } else if (!band.degenerate && band.rho < 0.0) {
    w = band.rho / band.rho_lower;
    extreme = &f_lower;
  }
  if (w < 0.0 || w > 1.0)
    throw std::logic_error("joint_pmf_model: mixture weight outside [0,1]");

  if (extreme == nullptr) {
    for (int x = 0; x < B; ++x)
      for (int y = 0; y < B; ++y)
        out.mass[static_cast<std::size_t>(x) * B + y] = fx.mass[x] * fy.mass[y];
    return;
  }
  const double wc = 1.0 - w;
  for (int x = 0; x < B; ++x)
    for (int y = 0; y < B; ++y) {
      const std::size_t i = static_cast<std::size_t>(x) * B + y;
      out.mass[i] = w * extreme->mass[i] + wc * (fx.mass[x] * fy.mass[y]);
    }
}

}  // namespace detail

/// Maps intensities in [0,1] onto bins 0..B-1 with fixed global edges:
/// v -> min(floor(v*B), B-1). The edges do not depend on patch content, so
/// source and target are always measured on the same scale.
inline std::vector<int> quantize(std::span<const float> values, int bins) {
  std::vector<int> out;
  detail::quantize_into(values, bins, out);
  return out;
}

/// Histogram estimator of the marginal PMF of one patch.
inline Pmf estimate_pmf(std::span<const int> idx, int bins) {
  Pmf out;
  detail::estimate_pmf_into(idx, bins, out);
  return out;
}

inline Cdf cdf_from_pmf(const Pmf& p) {
  Cdf out;
  detail::cdf_into(p, out);
  return out;
}

inline JointCdfBounds frechet_bounds(const Cdf& fx, const Cdf& fy) {
  JointCdfBounds out;
  detail::frechet_bounds_into(fx, fy, out);
  return out;
}

/// PMF of the chosen boundary coupling, by 2-D finite differencing of the
/// boundary CDF. The upper bound yields the comonotone coupling, the lower
/// bound the antimonotone one.
inline JointPmf boundary_pmf(const JointCdfBounds& bounds, Bound which) {
  JointPmf out;
  detail::boundary_pmf_into(bounds, which, out);
  return out;
}

/// Hoeffding covariance identity on an arbitrary joint CDF grid:
///   cov = sum_x sum_y (F_XY(x,y) - F_X(x) F_Y(y)).
/// Applied to the upper (lower) Frechet bound this gives sigma^U >= 0
/// (sigma^L <= 0).
inline double hoeffding_covariance(std::span<const double> joint_cdf,
                                   const Cdf& fx, const Cdf& fy) {
  detail::check_bins(fx.bins, fy.bins, "hoeffding_covariance");
  const int B = fx.bins;
  if (joint_cdf.size() != static_cast<std::size_t>(B) * B)
    throw std::invalid_argument("hoeffding_covariance: grid size mismatch");
  double acc = 0.0;
  for (int x = 0; x < B; ++x)
    for (int y = 0; y < B; ++y)
      acc += joint_cdf[static_cast<std::size_t>(x) * B + y] -
             fx.cum[x] * fy.cum[y];
  return acc;
}

/// Convenience overload evaluating Hoeffding's identity on one of the
/// stored bounds with count-exact arithmetic.
inline double hoeffding_covariance(const JointCdfBounds& bounds, const Cdf& fx,
                                   const Cdf& fy, Bound which) {
  const double n = static_cast<double>(bounds.samples);
  return static_cast<double>(
             detail::boundary_covariance_numerator(bounds, fx, fy, which)) /
         (n * n);
}

/// Sample Pearson correlation of the paired bin indices together with the
/// boundary correlations rho^L = sigma^L/(sigma_x sigma_y) and
/// rho^U = sigma^U/(sigma_x sigma_y). Population variances throughout; rho
/// is clamped into [rho^L, rho^U]; zero-variance patches yield a degenerate
/// band with all correlations 0.
inline CorrelationBand correlation_band(std::span<const int> xs,
                                        std::span<const int> ys, const Cdf& fx,
                                        const Cdf& fy,
                                        const JointCdfBounds& bounds) {
  CorrelationBand out;
  detail::band_into(xs, ys, fx, fy, bounds, out);
  return out;
}

/// Bivariate model: mixes the attained boundary coupling with the
/// independence product. Preserves both marginals for any rho in the band.
inline JointPmf joint_pmf_model(const CorrelationBand& band,
                                const JointPmf& f_upper,
                                const JointPmf& f_lower, const Pmf& fx,
                                const Pmf& fy) {
  JointPmf out;
  detail::mixture_into(band, f_upper, f_lower, fx, fy, out);
  return out;
}

}  // namespace confmap
