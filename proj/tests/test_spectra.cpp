#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

#include "test_util.hpp"
#include "vcd/error.hpp"
#include "vcd/reward_opt.hpp"
#include "vcd/spectra.hpp"

using namespace vcd;
using vcd::testing::frame_from_rows;
using vcd::testing::random_frame;

namespace {

constexpr double kPi = std::numbers::pi;

FeatureMap map_of(const std::vector<std::vector<double>>& rows) { return to_feature_map(frame_from_rows(rows)); }

FeatureMap random_map(int c, int h, int w, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  FeatureMap m{"t", c, h, w, std::vector<double>(static_cast<std::size_t>(c) * h * w)};
  for (auto& v : m.data) v = dist(rng);
  return m;
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Dft2, ConstantMapHasOnlyDc) {
  const auto s = dft2(map_of({{0.5, 0.5}, {0.5, 0.5}}));
  EXPECT_EQ(s.at(0, 0, 0), std::complex<double>(2.0, 0.0));
  EXPECT_EQ(s.at(0, 0, 1), std::complex<double>(0.0, 0.0));
  EXPECT_EQ(s.at(0, 1, 0), std::complex<double>(0.0, 0.0));
  EXPECT_EQ(s.at(0, 1, 1), std::complex<double>(0.0, 0.0));
}

TEST(Dft2, ImpulseIsFlat) {
  const auto s = dft2(map_of({{1, 0}, {0, 0}}));
  for (const auto& z : s.coefficients) EXPECT_EQ(z, std::complex<double>(1.0, 0.0));
}

TEST(Dft2, ShiftKeepsAmplitudeChangesPhase) {
  const auto a = dft2(map_of({{1, 0}, {0, 0}}));
  const auto b = dft2(map_of({{0, 1}, {0, 0}}));
  bool phase_differs = false;
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(std::abs(a.coefficients[k]), std::abs(b.coefficients[k]));
    phase_differs |= std::arg(a.coefficients[k]) != std::arg(b.coefficients[k]);
  }
  EXPECT_TRUE(phase_differs);
  // Hand evaluation: X(u, v) = (-1)^v.
  EXPECT_EQ(b.at(0, 0, 1), std::complex<double>(-1.0, 0.0));
  EXPECT_EQ(b.at(0, 1, 1), std::complex<double>(-1.0, 0.0));
}

TEST(Dft2, DirectMatchesNaiveOracle) {
  const auto m = random_map(2, 5, 7, 1);
  const auto s = dft2_direct(m);
  for (int c = 0; c < 2; ++c) {
    const auto ref = vcd::testing::naive_dft2(m, c);
    for (std::size_t k = 0; k < ref.size(); ++k) {
      EXPECT_NEAR(s.coefficients[c * ref.size() + k].real(), ref[k].real(), 1e-10);
      EXPECT_NEAR(s.coefficients[c * ref.size() + k].imag(), ref[k].imag(), 1e-10);
    }
  }
}

TEST(Dft2, FftAgreesWithDirect) {
  for (auto [h, w] : {std::pair{64, 48}, std::pair{70, 65}, std::pair{9, 128}}) {
    const auto m = random_map(2, h, w, static_cast<unsigned>(h * w));
    const auto a = dft2_direct(m);
    const auto b = dft2_fft(m);
    double peak = 0.0;
    for (const auto& z : a.coefficients) peak = std::max(peak, std::abs(z));
    for (std::size_t k = 0; k < a.coefficients.size(); ++k) {
      ASSERT_LE(std::abs(a.coefficients[k] - b.coefficients[k]), 1e-6 * peak) << h << "x" << w << " k=" << k;
    }
  }
}

TEST(Dft2, DispatchesByMapSize) {
  const auto small = random_map(1, 64, 64, 3);
  EXPECT_EQ(dft2(small).coefficients, dft2_direct(small).coefficients);
  const auto large = random_map(1, 65, 10, 3);
  EXPECT_EQ(dft2(large).coefficients, dft2_fft(large).coefficients);
}

TEST(Dft2, DcEqualsSumAndParseval) {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const auto m = random_map(3, 4 + seed % 5, 3 + seed % 7, seed, 0.0, 2.0);
    const auto s = dft2(m);
    for (int c = 0; c < m.channels; ++c) {
      double sum = 0.0, energy = 0.0, spec_energy = 0.0;
      for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
          sum += m.at(c, y, x);
          energy += m.at(c, y, x) * m.at(c, y, x);
        }
      for (int u = 0; u < m.height; ++u)
        for (int v = 0; v < m.width; ++v) spec_energy += std::norm(s.at(c, u, v));
      EXPECT_NEAR(s.at(c, 0, 0).real(), sum, 1e-6 * std::abs(sum));
      EXPECT_NEAR(s.at(c, 0, 0).imag(), 0.0, 1e-9);
      EXPECT_NEAR(spec_energy, m.plane_size() * energy, 1e-5 * spec_energy);
    }
  }
}

TEST(Dft2, RejectsNonFinite) {
  auto m = random_map(1, 2, 2, 0);
  m.data[1] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(dft2(m), ValueError);
}

TEST(AmplitudePoints, ScalarConstantMultiset) {
  const auto cloud = amplitude_points(dft2(map_of({{0.5, 0.5}, {0.5, 0.5}})), DistributionMode::scalar);
  EXPECT_EQ(cloud.dim, 1);
  EXPECT_EQ(sorted(cloud.points), (std::vector<double>{0, 0, 0, 2}));
}

TEST(AmplitudePoints, ChannelVectorArity) {
  const auto cloud = amplitude_points(dft2(random_map(3, 8, 8, 2)), DistributionMode::channel_vector);
  EXPECT_EQ(cloud.dim, 3);
  EXPECT_EQ(cloud.count(), 64u);
  const auto scalar = amplitude_points(dft2(random_map(3, 8, 8, 2)), DistributionMode::scalar);
  EXPECT_EQ(scalar.count(), 192u);
  EXPECT_EQ(sorted(cloud.points), sorted(scalar.points));
}

TEST(AmplitudePoints, CircularShiftInvariance) {
  const Frame f = random_frame(8, 8, 3, 7);
  for (auto [dx, dy] : {std::pair{1, 0}, std::pair{3, 5}, std::pair{-2, 7}}) {
    const Frame g = circular_shift(f, dx, dy);
    const auto a = sorted(amplitude_points(dft2(to_feature_map(f)), DistributionMode::scalar).points);
    const auto b = sorted(amplitude_points(dft2(to_feature_map(g)), DistributionMode::scalar).points);
    for (std::size_t k = 0; k < a.size(); ++k) ASSERT_NEAR(a[k], b[k], 1e-9);
  }
}

TEST(PhasePoints, RealPositiveAndImpulseSpectra) {
  for (double v : phase_points(dft2(map_of({{0.3, 0.3}, {0.3, 0.3}})), DistributionMode::scalar).points) {
    EXPECT_EQ(v, 0.0);
  }
  for (double v : phase_points(dft2(map_of({{1, 0}, {0, 0}})), DistributionMode::scalar).points) EXPECT_EQ(v, 0.0);
}

TEST(PhasePoints, ShiftedImpulseHandComputed) {
  const auto cloud = phase_points(dft2(map_of({{0, 1}, {0, 0}})), DistributionMode::scalar, 1e-8);
  EXPECT_EQ(sorted(cloud.points), (std::vector<double>{0, 0, kPi, kPi}));
}

TEST(PhasePoints, RangeIsHalfOpenInterval) {
  for (unsigned seed = 0; seed < 20; ++seed) {
    auto m = random_map(2, 3 + seed % 4, 2 + seed % 5, seed);
    if (seed % 3 == 0) m.data[0] = -0.0;
    for (auto mode : {DistributionMode::scalar, DistributionMode::channel_vector}) {
      for (double p : phase_points(dft2(m), mode).points) {
        ASSERT_GT(p, -kPi);
        ASSERT_LE(p, kPi);
      }
    }
  }
  // A purely negative real spectrum must land on +pi, never -pi.
  const auto neg = phase_points(dft2(FeatureMap{"n", 1, 1, 2, {-1.0, -1.0}}), DistributionMode::scalar);
  EXPECT_EQ(neg.points[0], kPi);
}

TEST(PhasePoints, MaskingRule) {
  FeatureMap m{"m", 1, 1, 4, {1.0, 1.0, 1.0, 1.0 + 1e-10}};
  // Non-DC coefficients have magnitude ~1e-10 relative to DC = 4.
  const auto masked = phase_points(dft2(m), DistributionMode::scalar, 1e-8);
  for (double p : masked.points) EXPECT_EQ(p, 0.0);
  const auto unmasked = phase_points(dft2(m), DistributionMode::scalar, 0.0);
  EXPECT_NE(unmasked.points[1], 0.0);
  EXPECT_THROW(phase_points(dft2(m), DistributionMode::scalar, -1.0), ConfigError);
}

TEST(PhasePoints, BrightnessShiftOnlyMovesDcAmplitude) {
  const Frame f = random_frame(16, 16, 3, 12, 0.0, 0.85);
  const Frame g = vcd::testing::add_constant(f, 0.1);
  const auto sf = dft2(to_feature_map(f));
  const auto sg = dft2(to_feature_map(g));
  const auto pf = phase_points(sf, DistributionMode::scalar).points;
  const auto pg = phase_points(sg, DistributionMode::scalar).points;
  for (std::size_t k = 0; k < pf.size(); ++k) ASSERT_NEAR(pf[k], pg[k], 1e-9);
  const auto af = amplitude_points(sf, DistributionMode::scalar).points;
  const auto ag = amplitude_points(sg, DistributionMode::scalar).points;
  for (int c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < 256; ++k) {
      const auto idx = c * 256 + k;
      if (k == 0) {
        EXPECT_NEAR(ag[idx] - af[idx], 0.1 * 256, 1e-9);
      } else {
        ASSERT_NEAR(ag[idx], af[idx], 1e-9);
      }
    }
  }
}

TEST(FeaturePoints, Layouts) {
  FeatureMap m{"f", 2, 1, 2, {1, 2, 3, 4}};
  const auto scalar = feature_points(m, DistributionMode::scalar);
  EXPECT_EQ(scalar.points, (std::vector<double>{1, 2, 3, 4}));
  const auto cvec = feature_points(m, DistributionMode::channel_vector);
  EXPECT_EQ(cvec.dim, 2);
  EXPECT_EQ(cvec.points, (std::vector<double>{1, 3, 2, 4}));
  EXPECT_EQ(cvec.kind, CloudKind::feature);
}
