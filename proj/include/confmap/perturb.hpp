#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "confmap/image.hpp"
#include "confmap/rng.hpp"

namespace confmap {

enum class NoiseKind { gaussian, poisson, salt_pepper, speckle, blur };

/// One perturbation. `param` is kind-specific:
///   gaussian    additive variance        (default 0.01, mean 0)
///   poisson     unused (photon scale is fixed at 255 counts full scale)
///   salt_pepper pixel replacement density (default 0.05)
///   speckle     multiplicative variance   (default 0.05)
///   blur        Gaussian kernel standard deviation in pixels (default 0.5)
struct NoiseSpec {
  NoiseKind kind = NoiseKind::gaussian;
  double param = 0.01;
  std::uint64_t seed = 0;
};

/// Full scale used to convert intensities to Poisson count rates, matching
/// 8-bit acquisition.
inline constexpr double kPoissonScale = 255.0;

inline double default_noise_param(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::gaussian: return 0.01;
    case NoiseKind::poisson: return 0.0;
    case NoiseKind::salt_pepper: return 0.05;
    case NoiseKind::speckle: return 0.05;
    case NoiseKind::blur: return 0.5;
  }
  throw std::invalid_argument("unknown noise kind");
}

inline const char* noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::poisson: return "poisson";
    case NoiseKind::salt_pepper: return "salt_pepper";
    case NoiseKind::speckle: return "speckle";
    case NoiseKind::blur: return "blur";
  }
  throw std::invalid_argument("unknown noise kind");
}

inline NoiseKind noise_kind_from_name(const std::string& name) {
  if (name == "gaussian") return NoiseKind::gaussian;
  if (name == "poisson") return NoiseKind::poisson;
  if (name == "salt_pepper") return NoiseKind::salt_pepper;
  if (name == "speckle") return NoiseKind::speckle;
  if (name == "blur") return NoiseKind::blur;
  throw std::invalid_argument("unknown noise kind '" + name + "'");
}

inline NoiseSpec make_noise(NoiseKind kind, std::uint64_t seed) {
  return NoiseSpec{kind, default_noise_param(kind), seed};
}

inline void validate(const NoiseSpec& spec) {
  switch (spec.kind) {
    case NoiseKind::gaussian:
    case NoiseKind::speckle:
      if (spec.param < 0.0)
        throw std::invalid_argument("noise variance must be >= 0");
      break;
    case NoiseKind::salt_pepper:
      if (spec.param < 0.0 || spec.param > 1.0)
        throw std::invalid_argument("salt_pepper density must be in [0,1]");
      break;
    case NoiseKind::blur:
      if (!(spec.param > 0.0))
        throw std::invalid_argument("blur sigma must be > 0");
      break;
    case NoiseKind::poisson:
      break;
  }
}

/// Separable Gaussian blur with kernel radius ceil(3*sigma), mirror-padded
/// borders, kernel normalized to unit sum.
inline GrayImage gaussian_blur(const GrayImage& img, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_blur: sigma must be > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  if (radius >= std::min(img.width, img.height))
    throw std::invalid_argument("gaussian_blur: kernel radius too large for image");
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    sum += kernel[i + radius];
  }
  for (double& w : kernel) w /= sum;

  GrayImage tmp = make_image(img.width, img.height);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[i + radius] * img.at(r, detail::mirror_index(c + i, img.width));
      tmp.at(r, c) = static_cast<float>(acc);
    }
  GrayImage out = make_image(img.width, img.height);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[i + radius] * tmp.at(detail::mirror_index(r + i, img.height), c);
      out.at(r, c) = static_cast<float>(acc < 0.0 ? 0.0 : (acc > 1.0 ? 1.0 : acc));
    }
  return out;
}

/// Applies one noise model in normalized [0,1] space and clamps the result
/// back to [0,1]. Every random pixel uses its own splitmix64 stream keyed by
/// (seed, pixel index): equal (image, spec) inputs produce bit-identical
/// output regardless of evaluation order.
inline GrayImage apply_noise(const GrayImage& img, const NoiseSpec& spec) {
  validate(spec);
  if (spec.kind == NoiseKind::blur) return gaussian_blur(img, spec.param);

  GrayImage out = make_image(img.width, img.height);
  const std::size_t n = img.data.size();
  for (std::size_t i = 0; i < n; ++i) {
    SplitMix64 rng = pixel_stream(spec.seed, i);
    const double v = img.data[i];
    double res = v;
    switch (spec.kind) {
      case NoiseKind::gaussian:
        res = v + rng.normal() * std::sqrt(spec.param);
        break;
      case NoiseKind::poisson:
        res = static_cast<double>(rng.poisson(v * kPoissonScale)) / kPoissonScale;
        break;
      case NoiseKind::salt_pepper: {
        const double u = rng.uniform01();
        if (u < spec.param * 0.5)
          res = 0.0;
        else if (u < spec.param)
          res = 1.0;
        break;
      }
      case NoiseKind::speckle:
        res = v + rng.normal() * std::sqrt(spec.param) * v;
        break;
      case NoiseKind::blur:
        break;  // handled above
    }
    out.data[i] = static_cast<float>(res < 0.0 ? 0.0 : (res > 1.0 ? 1.0 : res));
  }
  return out;
}

}  // namespace confmap
