#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "confmap/image.hpp"
#include "confmap/parallel.hpp"
#include "confmap/stats.hpp"

namespace confmap {

/// Sliding-window configuration. patch must be odd; borders are always
/// handled by mirror padding so the output map matches the input size.
struct MapConfig {
  int patch = 7;
  int bins = 16;
};

/// Per-pixel map of confidence scores in [0,1], same dimensions as the
/// evaluated image pair.
struct ConfidenceMap {
  int width = 0;
  int height = 0;
  std::vector<double> scores;

  double& at(int row, int col) {
    return scores[static_cast<std::size_t>(row) * width + col];
  }
  double at(int row, int col) const {
    return scores[static_cast<std::size_t>(row) * width + col];
  }
  std::size_t size() const { return scores.size(); }
};

namespace detail {

inline double entropy_bits(std::span<const double> mass) {
  double h = 0.0;
  for (double p : mass)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

}  // namespace detail

/// Normalized mutual information of a modeled joint distribution:
///   S = 2 * I(X;Y) / (H(X) + H(Y)),  I = H(X) + H(Y) - H(X,Y)
/// in bits, with the 0*log(0) := 0 convention. Symmetric in (X,Y), equals 1
/// for a lossless coupling of identical marginals and 0 for the independence
/// product. Two constant patches carry no information: S := 0. The result is
/// clamped to [0,1].
inline double confidence_score(const JointPmf& joint, const Pmf& fx,
                               const Pmf& fy) {
  detail::check_bins(fx.bins, fy.bins, "confidence_score");
  detail::check_bins(fx.bins, joint.bins, "confidence_score");
  const int B = fx.bins;
  // The model must not have drifted from its marginals; a mismatch means an
  // upstream bug, not bad data.
  for (int x = 0; x < B; ++x) {
    double row = 0.0, col = 0.0;
    for (int y = 0; y < B; ++y) {
      row += joint.at(x, y);
      col += joint.at(y, x);
    }
    if (std::abs(row - fx.mass[x]) > 1e-6 || std::abs(col - fy.mass[x]) > 1e-6)
      throw std::logic_error("confidence_score: joint does not match marginals");
  }
  const double hx = detail::entropy_bits(fx.mass);
  const double hy = detail::entropy_bits(fy.mass);
  const double denom = hx + hy;
  if (denom <= 0.0) return 0.0;
  const double hxy = detail::entropy_bits(joint.mass);
  const double s = 2.0 * (hx + hy - hxy) / denom;
  if (s < 0.0) return 0.0;
  if (s > 1.0) return 1.0;
  return s;
}

namespace detail {

/// Scratch state for one worker evaluating windows; reused across pixels so
/// the hot loop performs no allocation.
struct ScoreEngine {
  int patch;
  int bins;
  std::vector<float> window_src, window_tgt;
  std::vector<int> xs, ys;
  Pmf fx, fy;
  Cdf Fx, Fy;
  JointCdfBounds bounds;
  JointPmf f_upper, f_lower, joint;
  CorrelationBand band;

  ScoreEngine(int patch_, int bins_) : patch(patch_), bins(bins_) {
    const std::size_t len = static_cast<std::size_t>(patch) * patch;
    window_src.resize(len);
    window_tgt.resize(len);
  }

  void gather(const GrayImage& padded, int row, int col, std::vector<float>& out) {
    // (row, col) is the window's top-left corner in padded coordinates.
    std::size_t k = 0;
    for (int r = 0; r < patch; ++r) {
      const float* line = &padded.at(row + r, col);
      for (int c = 0; c < patch; ++c) out[k++] = line[c];
    }
  }

  double score_window(const GrayImage& padded_src, const GrayImage& padded_tgt,
                      int row, int col) {
    gather(padded_src, row, col, window_src);
    gather(padded_tgt, row, col, window_tgt);
    quantize_into(window_src, bins, xs);
    quantize_into(window_tgt, bins, ys);
    estimate_pmf_into(xs, bins, fx);
    estimate_pmf_into(ys, bins, fy);
    cdf_into(fx, Fx);
    cdf_into(fy, Fy);
    frechet_bounds_into(Fx, Fy, bounds);
    boundary_pmf_into(bounds, Bound::upper, f_upper);
    boundary_pmf_into(bounds, Bound::lower, f_lower);
    band_into(xs, ys, Fx, Fy, bounds, band);
    mixture_into(band, f_upper, f_lower, fx, fy, joint);
    return confidence_score(joint, fx, fy);
  }
};

}  // namespace detail

/// Evaluates the full window chain at every pixel: quantize both mirrored
/// windows, estimate marginals, bound the joint CDF, model the joint PMF
/// from the attained correlation, and score with normalized mutual
/// information. Scores land at window centers with stride 1. Rows are
/// processed in parallel; every window is independent, so the output does
/// not depend on the thread count.
inline ConfidenceMap confidence_map(const GrayImage& src, const GrayImage& tgt,
                                    const MapConfig& cfg = {}) {
  require_same_size(src, tgt, "confidence_map");
  if (cfg.patch < 1 || cfg.patch % 2 == 0)
    throw std::invalid_argument("confidence_map: patch size must be odd");
  if (cfg.bins < 2)
    throw std::invalid_argument("confidence_map: bins must be >= 2");
  const int margin = (cfg.patch - 1) / 2;
  const GrayImage ps = pad_mirror(src, margin);
  const GrayImage pt = pad_mirror(tgt, margin);

  ConfidenceMap map;
  map.width = src.width;
  map.height = src.height;
  map.scores.assign(static_cast<std::size_t>(src.width) * src.height, 0.0);

  parallel_chunks(src.height, [&](int row_begin, int row_end) {
    detail::ScoreEngine engine(cfg.patch, cfg.bins);
    for (int r = row_begin; r < row_end; ++r)
      for (int c = 0; c < src.width; ++c)
        map.at(r, c) = engine.score_window(ps, pt, r, c);
  });
  return map;
}

inline double mean_confidence(const ConfidenceMap& map) {
  if (map.scores.empty())
    throw std::invalid_argument("mean_confidence: empty map");
  double acc = 0.0;
  for (double s : map.scores) acc += s;
  return acc / static_cast<double>(map.scores.size());
}

/// Mean over the pixels selected by a binary mask (mask value > 0.5).
inline double mean_confidence(const ConfidenceMap& map, const GrayImage& mask) {
  if (mask.width != map.width || mask.height != map.height)
    throw std::invalid_argument("mean_confidence: mask dimension mismatch");
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < map.scores.size(); ++i)
    if (mask.data[i] > 0.5f) {
      acc += map.scores[i];
      ++count;
    }
  if (count == 0) throw std::invalid_argument("mean_confidence: empty mask");
  return acc / static_cast<double>(count);
}

/// Renders scores as an 8-bit-ready grayscale image.
inline GrayImage to_gray(const ConfidenceMap& map) {
  GrayImage img = make_image(map.width, map.height);
  for (std::size_t i = 0; i < map.scores.size(); ++i)
    img.data[i] = static_cast<float>(map.scores[i]);
  return img;
}

}  // namespace confmap
