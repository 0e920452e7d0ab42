#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "vcd/encoder.hpp"

namespace vcd {

/// Unnormalized forward 2D DFT, one plane per channel, channel-major.
struct ComplexSpectrum {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<std::complex<double>> coefficients;

  const std::complex<double>& at(int c, int u, int v) const {
    return coefficients[(static_cast<std::size_t>(c) * height + u) * width + v];
  }
};

/// Largest side handled by the direct transform in `dft2`.
inline constexpr int kDirectDftMaxSide = 64;

/// Direct (separable, exact quarter-turn twiddles) for maps up to 64x64,
/// FFT beyond.
ComplexSpectrum dft2(const FeatureMap& map);
ComplexSpectrum dft2_direct(const FeatureMap& map);
ComplexSpectrum dft2_fft(const FeatureMap& map);

enum class DistributionMode { scalar, channel_vector };
std::string to_string(DistributionMode mode);
/// Accepts "scalar", "cvec"/"channel_vector".
DistributionMode parse_distribution_mode(const std::string& text);

enum class CloudKind { amplitude, phase, feature };
std::string to_string(CloudKind kind);

/// n points of dimension d, stored row-major.
struct PointCloud {
  CloudKind kind = CloudKind::amplitude;
  int dim = 1;
  std::vector<double> points;

  std::size_t count() const { return dim > 0 ? points.size() / static_cast<std::size_t>(dim) : 0; }
  const double* point(std::size_t k) const { return points.data() + k * static_cast<std::size_t>(dim); }
};

inline constexpr double kDefaultPhaseEps = 1e-8;

PointCloud amplitude_points(const ComplexSpectrum& spectrum, DistributionMode mode);
/// Phases in (-pi, pi]; coefficients below eps_rel times the channel's
/// peak magnitude get phase 0.
PointCloud phase_points(const ComplexSpectrum& spectrum, DistributionMode mode,
                        double eps_rel = kDefaultPhaseEps);
/// Raw activation values, same pooling layout as the spectral clouds.
PointCloud feature_points(const FeatureMap& map, DistributionMode mode);

}  // namespace vcd
