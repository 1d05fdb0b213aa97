#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "confmap/image.hpp"
#include "confmap/rng.hpp"

namespace confmap {

/// Deterministic synthetic test pair: a sharp-edged, finely textured
/// "structural" image (anatomy-like) and a smooth-blob "functional" image
/// (metabolism-like) loosely overlapping the same shapes.
struct SyntheticPair {
  GrayImage structural;
  GrayImage functional;
  std::uint64_t seed = 0;
};

namespace detail {

struct ShapeCenter {
  int x, y;
};

}  // namespace detail

inline SyntheticPair make_synthetic_pair(int width, int height,
                                         std::uint64_t seed) {
  if (width < 32 || height < 32)
    throw std::invalid_argument("make_synthetic_pair: dimensions must be >= 32x32");
  SplitMix64 rng(mix64(seed ^ 0xA5C9F3D17E5B621DULL));
  SyntheticPair pair;
  pair.seed = seed;
  pair.structural = make_image(width, height, 0.1f);
  pair.functional = make_image(width, height, 0.0f);

  detail::ShapeCenter centers[8];
  for (int s = 0; s < 8; ++s) {
    const int cx = static_cast<int>(rng.uniform01() * width);
    const int cy = static_cast<int>(rng.uniform01() * height);
    const int rw = width / 10 + static_cast<int>(rng.uniform01() * (width / 3 - width / 10 + 1));
    const int rh = height / 10 + static_cast<int>(rng.uniform01() * (height / 3 - height / 10 + 1));
    const float val = static_cast<float>(0.3 + 0.65 * rng.uniform01());
    const bool rect = rng.uniform01() < 0.5;
    centers[s] = {cx, cy};
    if (rect) {
      const int x0 = std::max(0, cx - rw / 2), x1 = std::min(width, cx + rw / 2 + 1);
      const int y0 = std::max(0, cy - rh / 2), y1 = std::min(height, cy + rh / 2 + 1);
      for (int r = y0; r < y1; ++r)
        for (int c = x0; c < x1; ++c) pair.structural.at(r, c) = val;
    } else {
      const double ax = std::max(rw, 1), ay = std::max(rh, 1);
      for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
          const double dx = (c - cx) / ax, dy = (r - cy) / ay;
          if (dx * dx + dy * dy <= 1.0) pair.structural.at(r, c) = val;
        }
    }
  }
  // fine texture on top of the sharp shapes
  for (std::size_t i = 0; i < pair.structural.data.size(); ++i) {
    SplitMix64 px = pixel_stream(seed ^ 0x517CC1B727220A95ULL, i);
    const double v = pair.structural.data[i] + (px.uniform01() * 2.0 - 1.0) * 0.06;
    pair.structural.data[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
  }
  // smooth blobs near a subset of the structural shapes
  for (int s = 0; s < 5; ++s) {
    const int jx = centers[s].x +
                   static_cast<int>(rng.uniform01() * (width / 4 + 1)) - width / 8;
    const int jy = centers[s].y +
                   static_cast<int>(rng.uniform01() * (height / 4 + 1)) - height / 8;
    const double sig = std::max(width, height) / (5.0 + 4.0 * rng.uniform01());
    const double amp = 0.35 + 0.55 * rng.uniform01();
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c) {
        const double d2 = static_cast<double>(c - jx) * (c - jx) +
                          static_cast<double>(r - jy) * (r - jy);
        pair.functional.at(r, c) += static_cast<float>(amp * std::exp(-d2 / (2.0 * sig * sig)));
      }
  }
  for (float& v : pair.functional.data) v = std::clamp(v, 0.0f, 1.0f);
  return pair;
}

/// Pixel-wise average, the simplest fusion baseline with nonzero information
/// transfer from both sources.
inline GrayImage average_fuse(const GrayImage& a, const GrayImage& b) {
  require_same_size(a, b, "average_fuse");
  GrayImage out = make_image(a.width, a.height);
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = 0.5f * (a.data[i] + b.data[i]);
  return out;
}

/// I.i.d. uniform [0,1) noise image; stands in for a completely unrelated
/// prediction.
inline GrayImage uniform_noise_image(int width, int height, std::uint64_t seed) {
  GrayImage out = make_image(width, height);
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    SplitMix64 px = pixel_stream(seed, i);
    out.data[i] = static_cast<float>(px.uniform01());
  }
  return out;
}

/// Sum of squared forward differences; sharp or textured images score much
/// higher than smooth ones.
inline double gradient_energy(const GrayImage& img) {
  double acc = 0.0;
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) {
      if (c + 1 < img.width) {
        const double d = static_cast<double>(img.at(r, c + 1)) - img.at(r, c);
        acc += d * d;
      }
      if (r + 1 < img.height) {
        const double d = static_cast<double>(img.at(r + 1, c)) - img.at(r, c);
        acc += d * d;
      }
    }
  return acc;
}

}  // namespace confmap
