#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace confmap {

/// Row-major grayscale image with intensities in [0,1].
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  float& at(int row, int col) {
    return data[static_cast<std::size_t>(row) * width + col];
  }
  float at(int row, int col) const {
    return data[static_cast<std::size_t>(row) * width + col];
  }
  std::size_t size() const { return data.size(); }
  bool same_size(const GrayImage& other) const {
    return width == other.width && height == other.height;
  }
};

inline GrayImage make_image(int width, int height, float fill = 0.0f) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("image dimensions must be >= 1");
  GrayImage img;
  img.width = width;
  img.height = height;
  img.data.assign(static_cast<std::size_t>(width) * height, fill);
  return img;
}

inline void require_same_size(const GrayImage& a, const GrayImage& b,
                              const char* what) {
  if (!a.same_size(b))
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.width) + "x" +
                                std::to_string(a.height) + " vs " +
                                std::to_string(b.width) + "x" +
                                std::to_string(b.height) + ")");
}

namespace detail {

/// Reflects an out-of-range index about the edges without repeating the
/// edge sample: -1 -> 1, n -> n-2. Valid while |overshoot| < n.
inline int mirror_index(int i, int n) {
  if (i < 0) i = -i;
  if (i >= n) i = 2 * n - 2 - i;
  return i;
}

}  // namespace detail

/// Pads by mirror reflection about the image edges; the interior is copied
/// unchanged. margin must satisfy margin < min(width, height).
inline GrayImage pad_mirror(const GrayImage& img, int margin) {
  if (margin < 0) throw std::invalid_argument("pad_mirror: negative margin");
  if (margin >= std::min(img.width, img.height))
    throw std::invalid_argument(
        "pad_mirror: margin " + std::to_string(margin) +
        " too large for " + std::to_string(img.width) + "x" +
        std::to_string(img.height) + " image");
  if (margin == 0) return img;
  GrayImage out = make_image(img.width + 2 * margin, img.height + 2 * margin);
  for (int r = 0; r < out.height; ++r) {
    const int sr = detail::mirror_index(r - margin, img.height);
    for (int c = 0; c < out.width; ++c) {
      const int sc = detail::mirror_index(c - margin, img.width);
      out.at(r, c) = img.at(sr, sc);
    }
  }
  return out;
}

inline GrayImage crop(const GrayImage& img, int row0, int col0, int height,
                      int width) {
  if (row0 < 0 || col0 < 0 || height < 1 || width < 1 ||
      row0 + height > img.height || col0 + width > img.width)
    throw std::invalid_argument("crop: window out of bounds");
  GrayImage out = make_image(width, height);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) out.at(r, c) = img.at(row0 + r, col0 + c);
  return out;
}

/// A pair of flattened WxW windows taken at the same center of two images.
struct PatchPair {
  std::vector<float> source;
  std::vector<float> target;
  int row = 0;
  int col = 0;
};

inline PatchPair extract_patch_pair(const GrayImage& src, const GrayImage& tgt,
                                    int row, int col, int patch) {
  require_same_size(src, tgt, "extract_patch_pair");
  if (patch < 1 || patch % 2 == 0)
    throw std::invalid_argument("extract_patch_pair: patch size must be odd");
  const int m = (patch - 1) / 2;
  if (row - m < 0 || col - m < 0 || row + m >= src.height ||
      col + m >= src.width)
    throw std::out_of_range("extract_patch_pair: window exceeds image bounds");
  PatchPair pp;
  pp.row = row;
  pp.col = col;
  pp.source.reserve(static_cast<std::size_t>(patch) * patch);
  pp.target.reserve(static_cast<std::size_t>(patch) * patch);
  for (int r = row - m; r <= row + m; ++r)
    for (int c = col - m; c <= col + m; ++c) {
      pp.source.push_back(src.at(r, c));
      pp.target.push_back(tgt.at(r, c));
    }
  return pp;
}

/// Rescales to full range: (v - min) / (max - min). A constant image is
/// returned unchanged. Off by default; see the --normalize CLI flag.
inline GrayImage normalize_full_range(const GrayImage& img) {
  auto [lo, hi] = std::minmax_element(img.data.begin(), img.data.end());
  if (*hi <= *lo) return img;
  GrayImage out = img;
  const float span = *hi - *lo;
  for (float& v : out.data) v = (v - *lo) / span;
  return out;
}

/// Row-major RGB image, channels interleaved, each channel in [0,1].
struct OverlayImage {
  int width = 0;
  int height = 0;
  std::vector<float> rgb;

  float& at(int row, int col, int channel) {
    return rgb[(static_cast<std::size_t>(row) * width + col) * 3 + channel];
  }
  float at(int row, int col, int channel) const {
    return rgb[(static_cast<std::size_t>(row) * width + col) * 3 + channel];
  }
};

inline OverlayImage make_overlay(int width, int height) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("overlay dimensions must be >= 1");
  OverlayImage img;
  img.width = width;
  img.height = height;
  img.rgb.assign(static_cast<std::size_t>(width) * height * 3, 0.0f);
  return img;
}

}  // namespace confmap
