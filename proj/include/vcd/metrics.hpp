#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vcd/encoder.hpp"
#include "vcd/frame.hpp"
#include "vcd/spectra.hpp"
#include "vcd/transport.hpp"

namespace vcd {

enum class TapCombine { sum, mean };
std::string to_string(TapCombine combine);
TapCombine parse_tap_combine(const std::string& text);

/// vcd: amplitude + phase sliced WD in frequency space.
/// vcd_l2: RMS difference of sorted scalar coefficient multisets.
/// vcd_feat: sliced WD on raw activations, no transform (reported in the
///   amplitude column, phase column 0).
/// amp_only / phase_only: vcd with the other term zeroed.
enum class Variant { vcd, vcd_l2, vcd_feat, amp_only, phase_only };
std::string to_string(Variant variant);
Variant parse_variant(const std::string& text);
inline constexpr Variant kAllVariants[] = {Variant::vcd, Variant::amp_only, Variant::phase_only,
                                           Variant::vcd_l2, Variant::vcd_feat};

struct MetricConfig {
  EncoderSpec encoder;
  DistributionMode mode = DistributionMode::channel_vector;
  SwdConfig swd;
  double alpha = 1.0;
  double eps_rel = kDefaultPhaseEps;
  bool use_temporal_weight = true;
  std::optional<int> frame_sample_count;
  TapCombine tap_combine = TapCombine::sum;
  std::uint64_t sample_seed = 0;
};

/// Throws ConfigError on out-of-range fields.
void validate(const MetricConfig& cfg);

/// (N - i + 1) / N for 1 <= i <= N; DomainError otherwise.
double temporal_weight(int i, int n);

struct FrameScore {
  int index = 0;
  double amplitude = 0.0;
  double phase = 0.0;
  double weight = 1.0;
  double total = 0.0;
};

struct VcdReport {
  Variant variant = Variant::vcd;
  MetricConfig config;
  int frame_count = 0;
  int cond_index = 1;
  std::vector<FrameScore> frames;  // ascending index
  double sum = 0.0;
  double mean = 0.0;

  std::vector<int> evaluated_indices() const;
};

/// Holds a built encoder and evaluates FDL / VCD and its variants.
/// Immutable after construction; all methods are safe to call concurrently.
class Scorer {
 public:
  /// Builds the encoder, loading weights from `cfg.encoder.weights_path`
  /// when the kind needs them.
  explicit Scorer(MetricConfig cfg);
  Scorer(MetricConfig cfg, Encoder encoder);

  const MetricConfig& config() const noexcept { return cfg_; }

  /// Per-tap point clouds of one frame; reusable across comparisons.
  struct Prepared {
    struct Tap {
      SortedProjections amplitude;
      SortedProjections phase;
      SortedProjections feature;
      std::vector<double> amplitude_scalar;  // sorted, vcd_l2 only
      std::vector<double> phase_scalar;
    };
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<Tap> taps;
  };
  Prepared prepare(const Frame& frame, Variant variant = Variant::vcd) const;

  /// Amplitude and phase distances summed (or averaged) over taps,
  /// before alpha and temporal weighting.
  std::pair<double, double> terms(const Prepared& a, const Prepared& b, Variant variant) const;

  /// D(A_U, A_V) + alpha * D(P_U, P_V), combined over taps.
  double fdl(const Frame& u, const Frame& v) const;

  FrameScore score_frame(const Frame& cond, const Frame& frame, int i, int n,
                         Variant variant = Variant::vcd) const;
  FrameScore score_frame(const Prepared& cond, const Frame& frame, int i, int n,
                         Variant variant = Variant::vcd) const;

  /// Scores every index other than the conditioning index (or a seeded
  /// sample of K of them). `cond_override`, when given, replaces the
  /// video's conditioning frame and is resampled to the frame size.
  VcdReport score_video(const Video& video, Variant variant = Variant::vcd,
                        const Frame* cond_override = nullptr) const;

 private:
  MetricConfig cfg_;
  std::shared_ptr<const Encoder> encoder_;
};

double fdl(const Frame& u, const Frame& v, const MetricConfig& cfg);
FrameScore vcd_frame(const Frame& cond, const Frame& frame, int i, int n, const MetricConfig& cfg);
FrameScore vcd_variant(const Frame& cond, const Frame& frame, int i, int n, const MetricConfig& cfg,
                       Variant variant);
VcdReport vcd_video(const Video& video, const MetricConfig& cfg, Variant variant = Variant::vcd);

/// Indices scored for a video: all i != cond_index, or a seeded uniform
/// K-subset of them (ascending).
std::vector<int> select_frame_indices(int frame_count, int cond_index, std::optional<int> k,
                                      std::uint64_t seed);

}  // namespace vcd
