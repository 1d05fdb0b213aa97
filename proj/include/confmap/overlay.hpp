#pragma once

#include <array>
#include <stdexcept>

#include "confmap/confidence.hpp"
#include "confmap/image.hpp"

namespace confmap {

/// Blend weight between confidence and the predicted image in the RGB
/// composites.
struct OverlayConfig {
  double alpha = 0.7;
};

namespace detail {

inline void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("overlay: alpha must be in [0,1]");
}

/// Shared channel arithmetic:
///   R = alpha * s_red + (1 - alpha) * base
///   G = alpha * s_green + (1 - alpha) * base
///   B = base
inline OverlayImage compose(const ConfidenceMap& s_red,
                            const ConfidenceMap& s_green,
                            const GrayImage& base, double alpha,
                            const char* what) {
  check_alpha(alpha);
  if (s_red.width != base.width || s_red.height != base.height ||
      s_green.width != base.width || s_green.height != base.height)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  OverlayImage out = make_overlay(base.width, base.height);
  const double beta = 1.0 - alpha;
  for (std::size_t i = 0; i < base.data.size(); ++i) {
    const double b = base.data[i];
    out.rgb[i * 3 + 0] = static_cast<float>(alpha * s_red.scores[i] + beta * b);
    out.rgb[i * 3 + 1] = static_cast<float>(alpha * s_green.scores[i] + beta * b);
    out.rgb[i * 3 + 2] = static_cast<float>(b);
  }
  return out;
}

}  // namespace detail

/// Fusion view: red carries confidence toward the anatomical source, green
/// toward the functional source, blue the fused image itself. Strong
/// anatomical transfer therefore reads magenta, strong functional transfer
/// cyan.
inline OverlayImage compose_fusion(const ConfidenceMap& s_mri,
                                   const ConfidenceMap& s_pet,
                                   const GrayImage& fused,
                                   const OverlayConfig& cfg = {}) {
  return detail::compose(s_mri, s_pet, fused, cfg.alpha, "compose_fusion");
}

/// Translation view: red carries confidence toward the source domain
/// (leakage), green toward the reference target domain (fidelity). Cyan is
/// the best case, blue means low confidence both ways, magenta means the
/// prediction mirrors the source instead of the target.
inline OverlayImage compose_translation(const ConfidenceMap& s_source,
                                        const ConfidenceMap& s_reference,
                                        const GrayImage& predicted,
                                        const OverlayConfig& cfg = {}) {
  return detail::compose(s_source, s_reference, predicted, cfg.alpha,
                         "compose_translation");
}

namespace detail {

// viridis anchors at t = k/16 (Smith & van der Walt's published colormap);
// strictly increasing in luminance, so piecewise-linear interpolation is
// luminance-monotone as well.
inline constexpr std::array<std::array<double, 3>, 17> kHeatRamp = {{
    {0.267004, 0.004874, 0.329415},
    {0.282327, 0.094955, 0.417331},
    {0.278826, 0.175490, 0.483397},
    {0.258965, 0.251537, 0.524736},
    {0.229739, 0.322361, 0.545706},
    {0.199430, 0.387607, 0.554642},
    {0.172719, 0.448791, 0.557885},
    {0.149039, 0.508051, 0.557250},
    {0.127568, 0.566949, 0.550556},
    {0.120638, 0.625828, 0.533488},
    {0.157851, 0.683765, 0.501686},
    {0.246070, 0.738910, 0.452024},
    {0.369214, 0.788888, 0.382914},
    {0.515992, 0.831158, 0.294279},
    {0.678489, 0.863742, 0.189503},
    {0.845561, 0.887322, 0.099702},
    {0.993248, 0.906157, 0.143936},
}};

}  // namespace detail

/// Color of a single score on the heat ramp (dark blue at 0, yellow at 1).
inline std::array<double, 3> heat_color(double score) {
  if (score < 0.0) score = 0.0;
  if (score > 1.0) score = 1.0;
  const double pos = score * 16.0;
  int k = static_cast<int>(pos);
  if (k > 15) k = 15;
  const double t = pos - k;
  const auto& a = detail::kHeatRamp[k];
  const auto& b = detail::kHeatRamp[k + 1];
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]),
          a[2] + t * (b[2] - a[2])};
}

/// Standalone heatmap rendering of a confidence map.
inline OverlayImage colormap_gray_to_heat(const ConfidenceMap& map) {
  OverlayImage out = make_overlay(map.width, map.height);
  for (std::size_t i = 0; i < map.scores.size(); ++i) {
    const auto c = heat_color(map.scores[i]);
    out.rgb[i * 3 + 0] = static_cast<float>(c[0]);
    out.rgb[i * 3 + 1] = static_cast<float>(c[1]);
    out.rgb[i * 3 + 2] = static_cast<float>(c[2]);
  }
  return out;
}

}  // namespace confmap
