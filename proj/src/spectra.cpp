#include "vcd/spectra.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "vcd/error.hpp"

namespace vcd {

namespace {

using cd = std::complex<double>;

// exp(-2 pi i k / n) for k in [0, n). Quarter turns are exact so that small
// integer fixtures transform without rounding noise.
std::vector<cd> twiddles(int n) {
  std::vector<cd> t(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    if ((4 * k) % n == 0) {
      static const cd quarter[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
      t[static_cast<std::size_t>(k)] = quarter[(4 * k) / n];
    } else {
      const double angle = -2.0 * std::numbers::pi * k / n;
      t[static_cast<std::size_t>(k)] = {std::cos(angle), std::sin(angle)};
    }
  }
  return t;
}

void check_finite(const FeatureMap& map) {
  for (double v : map.data) {
    if (!std::isfinite(v)) throw ValueError("non-finite value in feature map " + map.tap);
  }
}

// FFTW's planner is not thread-safe; execution on distinct arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

ComplexSpectrum dft2_direct(const FeatureMap& map) {
  check_finite(map);
  const int h = map.height;
  const int w = map.width;
  const auto tw_h = twiddles(h);
  const auto tw_w = twiddles(w);
  ComplexSpectrum out{map.channels, h, w, {}};
  out.coefficients.resize(map.data.size());
  std::vector<cd> rows(static_cast<std::size_t>(h) * w);
  for (int c = 0; c < map.channels; ++c) {
    const double* plane = map.data.data() + static_cast<std::size_t>(c) * h * w;
    for (int y = 0; y < h; ++y) {
      for (int v = 0; v < w; ++v) {
        cd acc{0, 0};
        for (int x = 0; x < w; ++x) {
          acc += plane[static_cast<std::size_t>(y) * w + x] *
                 tw_w[static_cast<std::size_t>((static_cast<long>(v) * x) % w)];
        }
        rows[static_cast<std::size_t>(y) * w + v] = acc;
      }
    }
    cd* dst = out.coefficients.data() + static_cast<std::size_t>(c) * h * w;
    for (int u = 0; u < h; ++u) {
      for (int v = 0; v < w; ++v) {
        cd acc{0, 0};
        for (int y = 0; y < h; ++y) {
          acc += rows[static_cast<std::size_t>(y) * w + v] *
                 tw_h[static_cast<std::size_t>((static_cast<long>(u) * y) % h)];
        }
        dst[static_cast<std::size_t>(u) * w + v] = acc;
      }
    }
  }
  return out;
}

ComplexSpectrum dft2_fft(const FeatureMap& map) {
  check_finite(map);
  const int h = map.height;
  const int w = map.width;
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  ComplexSpectrum out{map.channels, h, w, {}};
  out.coefficients.resize(map.data.size());

  auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * plane));
  auto* res = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * plane));
  if (in == nullptr || res == nullptr) {
    fftw_free(in);
    fftw_free(res);
    throw std::bad_alloc();
  }
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_2d(h, w, in, res, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (int c = 0; c < map.channels; ++c) {
    const double* src = map.data.data() + static_cast<std::size_t>(c) * plane;
    for (std::size_t k = 0; k < plane; ++k) {
      in[k][0] = src[k];
      in[k][1] = 0.0;
    }
    fftw_execute(plan);
    cd* dst = out.coefficients.data() + static_cast<std::size_t>(c) * plane;
    for (std::size_t k = 0; k < plane; ++k) dst[k] = {res[k][0], res[k][1]};
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(res);
  return out;
}

ComplexSpectrum dft2(const FeatureMap& map) {
  if (map.height <= kDirectDftMaxSide && map.width <= kDirectDftMaxSide) return dft2_direct(map);
  return dft2_fft(map);
}

std::string to_string(DistributionMode mode) {
  return mode == DistributionMode::scalar ? "scalar" : "channel_vector";
}

DistributionMode parse_distribution_mode(const std::string& text) {
  if (text == "scalar") return DistributionMode::scalar;
  if (text == "cvec" || text == "channel_vector") return DistributionMode::channel_vector;
  throw ConfigError("unknown distribution mode '" + text + "'");
}

std::string to_string(CloudKind kind) {
  switch (kind) {
    case CloudKind::amplitude: return "amplitude";
    case CloudKind::phase: return "phase";
    case CloudKind::feature: return "feature";
  }
  return "?";
}

namespace {

// Lays out per-(channel, position) values as a point cloud. `value(c, k)`
// gives the value of channel c at flat position k.
template <typename F>
PointCloud pool_values(CloudKind kind, int channels, std::size_t positions, DistributionMode mode,
                       F value) {
  PointCloud cloud;
  cloud.kind = kind;
  cloud.points.resize(static_cast<std::size_t>(channels) * positions);
  if (mode == DistributionMode::scalar) {
    cloud.dim = 1;
    for (int c = 0; c < channels; ++c)
      for (std::size_t k = 0; k < positions; ++k) cloud.points[c * positions + k] = value(c, k);
  } else {
    cloud.dim = channels;
    for (std::size_t k = 0; k < positions; ++k)
      for (int c = 0; c < channels; ++c) cloud.points[k * channels + c] = value(c, k);
  }
  return cloud;
}

}  // namespace

PointCloud amplitude_points(const ComplexSpectrum& spectrum, DistributionMode mode) {
  const std::size_t positions = static_cast<std::size_t>(spectrum.height) * spectrum.width;
  return pool_values(CloudKind::amplitude, spectrum.channels, positions, mode,
                     [&](int c, std::size_t k) { return std::abs(spectrum.coefficients[c * positions + k]); });
}

PointCloud phase_points(const ComplexSpectrum& spectrum, DistributionMode mode, double eps_rel) {
  if (!(eps_rel >= 0.0)) throw ConfigError("phase mask eps_rel must be >= 0");
  const std::size_t positions = static_cast<std::size_t>(spectrum.height) * spectrum.width;
  std::vector<double> threshold(static_cast<std::size_t>(spectrum.channels), 0.0);
  for (int c = 0; c < spectrum.channels; ++c) {
    double peak = 0.0;
    for (std::size_t k = 0; k < positions; ++k) peak = std::max(peak, std::abs(spectrum.coefficients[c * positions + k]));
    threshold[static_cast<std::size_t>(c)] = eps_rel * peak;
  }
  return pool_values(CloudKind::phase, spectrum.channels, positions, mode, [&](int c, std::size_t k) {
    const cd z = spectrum.coefficients[c * positions + k];
    const double mag = std::abs(z);
    if (mag == 0.0 || mag < threshold[static_cast<std::size_t>(c)]) return 0.0;
    const double phase = std::atan2(z.imag(), z.real());
    return phase <= -std::numbers::pi ? std::numbers::pi : phase;
  });
}

PointCloud feature_points(const FeatureMap& map, DistributionMode mode) {
  const std::size_t positions = map.plane_size();
  return pool_values(CloudKind::feature, map.channels, positions, mode,
                     [&](int c, std::size_t k) { return map.data[c * positions + k]; });
}

}  // namespace vcd
