#include <gtest/gtest.h>

#include <cstdlib>
#include <numbers>

#include "test_util.hpp"
#include "vcd/error.hpp"
#include "vcd/media_io.hpp"
#include "vcd/metrics.hpp"
#include "vcd/report.hpp"
#include "vcd/reward_opt.hpp"

using namespace vcd;
using vcd::testing::frame_from_rows;
using vcd::testing::random_frame;

namespace {

MetricConfig identity_cfg(DistributionMode mode = DistributionMode::channel_vector) {
  MetricConfig cfg;
  cfg.mode = mode;
  return cfg;
}

MetricConfig random_cfg() {
  MetricConfig cfg;
  cfg.encoder.kind = EncoderKind::random_conv;
  cfg.encoder.seed = 5;
  return cfg;
}

Frame textured(unsigned seed = 1) { return make_textured_frame(16, 16, 3, seed); }

Frame noisy(const Frame& f, double sigma, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist(0.0, sigma);
  std::vector<double> d = f.data();
  for (auto& v : d) v = std::clamp(v + dist(rng), 0.0, 1.0);
  return Frame(f.height(), f.width(), f.channels(), std::move(d));
}

// Oracle for the scalar W2 between sorted coefficient sets, from the naive DFT.
std::pair<double, double> scalar_w2_oracle(const Frame& a, const Frame& b) {
  auto coeffs = [](const Frame& f, bool phase) {
    const auto m = to_feature_map(f);
    std::vector<double> out;
    for (int c = 0; c < m.channels; ++c) {
      const auto spec = vcd::testing::naive_dft2(m, c);
      double peak = 0;
      for (const auto& z : spec) peak = std::max(peak, std::abs(z));
      for (const auto& z : spec) {
        if (!phase) {
          out.push_back(std::abs(z));
        } else {
          double p = std::abs(z) < 1e-8 * peak ? 0.0 : std::arg(z);
          out.push_back(p <= -std::numbers::pi ? std::numbers::pi : p);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  auto w2 = [](const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0;
    for (std::size_t k = 0; k < x.size(); ++k) acc += (x[k] - y[k]) * (x[k] - y[k]);
    return std::sqrt(acc / x.size());
  };
  return {w2(coeffs(a, false), coeffs(b, false)), w2(coeffs(a, true), coeffs(b, true))};
}

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    setenv(name, value, 1);
  }
  ~ScopedEnv() {
    if (old_) setenv(name_, old_->c_str(), 1);
    else unsetenv(name_);
  }

 private:
  const char* name_;
  std::optional<std::string> old_;
};

}  // namespace

TEST(TemporalWeight, Values) {
  EXPECT_EQ(temporal_weight(1, 10), 1.0);
  EXPECT_EQ(temporal_weight(10, 10), 0.1);
  EXPECT_EQ(temporal_weight(2, 51), 50.0 / 51.0);
  EXPECT_NEAR(temporal_weight(2, 51), 0.98039, 1e-5);
  EXPECT_THROW(temporal_weight(0, 10), DomainError);
  EXPECT_THROW(temporal_weight(11, 10), DomainError);
}

TEST(Fdl, ZeroOnIdenticalAndSymmetric) {
  const Frame u = random_frame(8, 8, 3, 1);
  const Frame v = random_frame(8, 8, 3, 2);
  for (const auto& cfg : {identity_cfg(), identity_cfg(DistributionMode::scalar), random_cfg()}) {
    EXPECT_EQ(fdl(u, u, cfg), 0.0);
    EXPECT_EQ(fdl(u, v, cfg), fdl(v, u, cfg));
    EXPECT_GT(fdl(u, v, cfg), 0.0);
  }
}

TEST(Fdl, ShiftedImpulseHandComputed) {
  const Frame u = frame_from_rows({{1, 0}, {0, 0}});
  const Frame v = frame_from_rows({{0, 1}, {0, 0}});
  const auto cfg = identity_cfg(DistributionMode::scalar);
  // Phases {0,0,0,0} vs {0,pi,0,pi}: sorted W2 = sqrt(2 pi^2 / 4) = pi / sqrt(2).
  EXPECT_NEAR(fdl(u, v, cfg), std::numbers::pi / std::sqrt(2.0), 1e-15);
  const auto s = vcd_frame(u, v, 1, 1, cfg);
  EXPECT_EQ(s.amplitude, 0.0);
  EXPECT_NEAR(s.phase, std::numbers::pi / std::sqrt(2.0), 1e-15);
  auto half = cfg;
  half.alpha = 0.5;
  EXPECT_NEAR(fdl(u, v, half), 0.5 * std::numbers::pi / std::sqrt(2.0), 1e-15);
}

TEST(VcdFrame, IdenticalFramesScoreZero) {
  const Frame x = random_frame(12, 10, 3, 3);
  for (int i = 1; i <= 5; ++i) {
    const auto s = vcd_frame(x, x, i, 5, identity_cfg());
    EXPECT_EQ(s.total, 0.0);
    EXPECT_EQ(s.index, i);
  }
  EXPECT_EQ(vcd_frame(x, x, 2, 3, random_cfg()).total, 0.0);
}

TEST(VcdFrame, TemporalWeightRatio) {
  const Frame c = textured(2);
  const Frame x = random_frame(16, 16, 3, 9);
  auto on = identity_cfg();
  auto off = on;
  off.use_temporal_weight = false;
  const int n = 7;
  for (int i = 1; i <= n; ++i) {
    const auto a = vcd_frame(c, x, i, n, on);
    const auto b = vcd_frame(c, x, i, n, off);
    EXPECT_EQ(a.weight, static_cast<double>(n - i + 1) / n);
    EXPECT_EQ(a.total, a.weight * b.total);
    EXPECT_EQ(b.total, b.amplitude + b.phase);
  }
}

TEST(VcdFrame, CircularShiftDichotomy) {
  const Frame c = textured(3);
  const Frame x = circular_shift(c, 3, 1);
  for (auto mode : {DistributionMode::scalar, DistributionMode::channel_vector}) {
    const auto s = vcd_frame(c, x, 2, 4, identity_cfg(mode));
    EXPECT_LE(s.amplitude, 1e-9);
    EXPECT_GT(s.phase, 0.01);
  }
}

TEST(VcdFrame, BrightnessShiftDichotomy) {
  const Frame c = textured(4);
  const Frame x = vcd::testing::add_constant(c, 0.1);
  for (auto mode : {DistributionMode::scalar, DistributionMode::channel_vector}) {
    const auto s = vcd_frame(c, x, 2, 4, identity_cfg(mode));
    EXPECT_LE(s.phase, 1e-9);
    EXPECT_GT(s.amplitude, 0.0);
  }
}

TEST(VcdFrame, ShapeMismatch) {
  EXPECT_THROW(vcd_frame(random_frame(4, 4, 3, 1), random_frame(4, 5, 3, 1), 2, 3, identity_cfg()), ShapeError);
  EXPECT_THROW(vcd_frame(random_frame(4, 4, 3, 1), random_frame(4, 4, 3, 1), 4, 3, identity_cfg()), DomainError);
}

TEST(VcdFrame, TapCombineMean) {
  auto sum_cfg = random_cfg();
  auto mean_cfg = sum_cfg;
  mean_cfg.tap_combine = TapCombine::mean;
  const Frame c = textured(5);
  const Frame x = random_frame(16, 16, 3, 5);
  const auto s = vcd_frame(c, x, 2, 3, sum_cfg);
  const auto m = vcd_frame(c, x, 2, 3, mean_cfg);
  EXPECT_NEAR(m.amplitude, s.amplitude / 2, 1e-12 * s.amplitude);
  EXPECT_NEAR(m.phase, s.phase / 2, 1e-12 * s.phase);
}

TEST(Variants, ZeroOnIdenticalFrames) {
  const Frame x = textured(6);
  for (Variant v : kAllVariants) {
    for (const auto& cfg : {identity_cfg(), random_cfg()}) EXPECT_EQ(vcd_variant(x, x, 2, 5, cfg, v).total, 0.0);
  }
}

TEST(Variants, CircularShiftSeparation) {
  const Frame c = textured(7);
  const Frame x = circular_shift(c, 2, 2);
  for (auto mode : {DistributionMode::scalar, DistributionMode::channel_vector}) {
    const auto cfg = identity_cfg(mode);
    EXPECT_LE(vcd_variant(c, x, 2, 3, cfg, Variant::amp_only).total, 1e-9);
    EXPECT_GT(vcd_variant(c, x, 2, 3, cfg, Variant::phase_only).total, 0.0);
    EXPECT_EQ(vcd_variant(c, x, 2, 3, cfg, Variant::vcd_feat).total, 0.0);
    EXPECT_GT(vcd_variant(c, x, 2, 3, cfg, Variant::vcd).total, 0.0);
  }
  // The 4x4 fixture.
  const Frame small = random_frame(4, 4, 1, 11);
  const Frame moved = circular_shift(small, 1, 0);
  EXPECT_EQ(vcd_variant(small, moved, 2, 2, identity_cfg(), Variant::vcd_feat).total, 0.0);
  EXPECT_GT(vcd_frame(small, moved, 2, 2, identity_cfg()).total, 0.0);
}

TEST(Variants, ZeroedTermsReportedAsZero) {
  const Frame c = textured(8);
  const Frame x = random_frame(16, 16, 3, 8);
  const auto cfg = identity_cfg();
  const auto full = vcd_variant(c, x, 2, 3, cfg, Variant::vcd);
  const auto amp = vcd_variant(c, x, 2, 3, cfg, Variant::amp_only);
  const auto phase = vcd_variant(c, x, 2, 3, cfg, Variant::phase_only);
  EXPECT_EQ(amp.phase, 0.0);
  EXPECT_EQ(amp.amplitude, full.amplitude);
  EXPECT_EQ(phase.amplitude, 0.0);
  EXPECT_EQ(phase.phase, full.phase);
  EXPECT_EQ(vcd_variant(c, x, 2, 3, cfg, Variant::vcd_feat).phase, 0.0);
}

TEST(Variants, L2EqualsScalarW2) {
  const Frame c = textured(9);
  for (const Frame& x : {circular_shift(c, 1, 3), random_frame(16, 16, 3, 12), vcd::testing::add_constant(c, 0.05)}) {
    const auto [amp_oracle, phase_oracle] = scalar_w2_oracle(c, x);
    auto cfg = identity_cfg(DistributionMode::scalar);
    cfg.use_temporal_weight = false;
    const auto l2 = vcd_variant(c, x, 2, 3, cfg, Variant::vcd_l2);
    EXPECT_NEAR(l2.amplitude, amp_oracle, 1e-9);
    EXPECT_NEAR(l2.phase, phase_oracle, 1e-9);
    const auto w = vcd_variant(c, x, 2, 3, cfg, Variant::vcd);
    EXPECT_NEAR(l2.total, w.total, 1e-9);
  }
}

TEST(VcdVideo, StillVideoIsZero) {
  const Frame c = textured(10);
  const auto r = vcd_video(Video(std::vector<Frame>(4, c)), identity_cfg());
  EXPECT_EQ(r.mean, 0.0);
  EXPECT_EQ(r.sum, 0.0);
  for (const auto& f : r.frames) EXPECT_EQ(f.total, 0.0);
}

TEST(VcdVideo, EvaluatedIndices) {
  const Video v({textured(1), textured(2), textured(3)});
  const auto r = vcd_video(v, identity_cfg());
  EXPECT_EQ(r.evaluated_indices(), (std::vector<int>{2, 3}));
  EXPECT_NEAR(r.mean, (r.frames[0].total + r.frames[1].total) / 2, 1e-15);

  const Video v3({textured(1), textured(2), textured(3)}, 2);
  EXPECT_EQ(vcd_video(v3, identity_cfg()).evaluated_indices(), (std::vector<int>{1, 3}));
}

TEST(VcdVideo, SampledIndices) {
  std::vector<Frame> frames;
  for (unsigned s = 0; s < 8; ++s) frames.push_back(textured(s));
  const Video v(frames);
  auto cfg = identity_cfg();
  cfg.frame_sample_count = 3;
  cfg.sample_seed = 4;
  const auto a = vcd_video(v, cfg).evaluated_indices();
  ASSERT_EQ(a.size(), 3u);
  for (int i : a) {
    EXPECT_GE(i, 2);
    EXPECT_LE(i, 8);
  }
  EXPECT_EQ(a, vcd_video(v, cfg).evaluated_indices());
  cfg.frame_sample_count = 7;
  EXPECT_EQ(vcd_video(v, cfg).evaluated_indices(), (std::vector<int>{2, 3, 4, 5, 6, 7, 8}));
  cfg.frame_sample_count = 8;
  EXPECT_THROW(vcd_video(v, cfg), ConfigError);
}

TEST(VcdVideo, SampleSelectionIsRoughlyUniform) {
  std::vector<int> hits(11, 0);
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    for (int i : select_frame_indices(10, 1, 3, seed)) ++hits[static_cast<std::size_t>(i)];
  }
  EXPECT_EQ(hits[1], 0);
  // Each of 9 candidates expects 2000 * 3 / 9 = 666.7 hits.
  for (int i = 2; i <= 10; ++i) EXPECT_NEAR(hits[static_cast<std::size_t>(i)], 666.7, 100.0) << i;
}

TEST(VcdVideo, ReportIndependentOfWorkerCount) {
  std::vector<Frame> frames{textured(1)};
  for (unsigned s = 0; s < 9; ++s) frames.push_back(random_frame(16, 16, 3, s));
  const Video v(frames);
  std::string one, many;
  {
    ScopedEnv env("VCD_NUM_WORKERS", "1");
    one = report_to_json(vcd_video(v, random_cfg()));
  }
  {
    ScopedEnv env("VCD_NUM_WORKERS", "4");
    many = report_to_json(vcd_video(v, random_cfg()));
  }
  EXPECT_EQ(one, many);
}

TEST(VcdVideo, CondOverrideIsResampled) {
  const Frame c = textured(3);
  const Video v({c, circular_shift(c, 1, 0), c});
  const Scorer scorer(identity_cfg());
  const Frame big = resize_bilinear(c, 32, 32);
  const auto r = scorer.score_video(v, Variant::vcd, &big);
  EXPECT_EQ(r.frames.size(), 2u);
  EXPECT_GT(r.frames[1].total, 0.0);  // resampled cond is not bit-equal to frame 3
  const auto same = scorer.score_video(v, Variant::vcd, &c);
  EXPECT_EQ(same.frames[1].total, 0.0);
  const Frame gray(16, 16, 1, 0.5);
  EXPECT_THROW(scorer.score_video(v, Variant::vcd, &gray), ShapeError);
}

TEST(VcdVideo, NoiseMonotonicity) {
  const Frame c = make_textured_frame(16, 16, 3, 21);
  const double sigmas[] = {0.01, 0.05, 0.1};
  double prev = 0.0;
  const Scorer scorer(identity_cfg());
  for (double sigma : sigmas) {
    double acc = 0.0;
    for (unsigned seed = 0; seed < 5; ++seed) {
      acc += scorer.score_video(Video({c, noisy(c, sigma, seed), noisy(c, sigma, seed + 100)})).mean;
    }
    EXPECT_GT(acc / 5, prev) << sigma;
    prev = acc / 5;
  }
}

TEST(MetricConfigValidation, Rejects) {
  auto cfg = identity_cfg();
  cfg.alpha = -1;
  EXPECT_THROW(Scorer{cfg}, ConfigError);
  cfg = identity_cfg();
  cfg.swd.order = 3;
  EXPECT_THROW(Scorer{cfg}, ConfigError);
  cfg = identity_cfg();
  cfg.frame_sample_count = 0;
  EXPECT_THROW(Scorer{cfg}, ConfigError);
}
