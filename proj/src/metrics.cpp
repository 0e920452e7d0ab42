#include "vcd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vcd/error.hpp"
#include "vcd/media_io.hpp"
#include "vcd/parallel.hpp"
#include "vcd/rng.hpp"

namespace vcd {

std::string to_string(TapCombine combine) { return combine == TapCombine::sum ? "sum" : "mean"; }

TapCombine parse_tap_combine(const std::string& text) {
  if (text == "sum") return TapCombine::sum;
  if (text == "mean") return TapCombine::mean;
  throw ConfigError("unknown tap combine rule '" + text + "'");
}

std::string to_string(Variant variant) {
  switch (variant) {
    case Variant::vcd: return "vcd";
    case Variant::vcd_l2: return "vcd_l2";
    case Variant::vcd_feat: return "vcd_feat";
    case Variant::amp_only: return "amp_only";
    case Variant::phase_only: return "phase_only";
  }
  return "?";
}

Variant parse_variant(const std::string& text) {
  for (Variant v : kAllVariants) {
    if (to_string(v) == text) return v;
  }
  throw ConfigError("unknown variant '" + text + "'");
}

void validate(const MetricConfig& cfg) {
  if (!std::isfinite(cfg.alpha) || cfg.alpha < 0.0) throw ConfigError("alpha must be finite and >= 0");
  if (!std::isfinite(cfg.eps_rel) || cfg.eps_rel < 0.0) throw ConfigError("eps_rel must be finite and >= 0");
  if (cfg.swd.num_projections < 1) throw ConfigError("projections must be >= 1");
  if (cfg.swd.order != 1 && cfg.swd.order != 2) throw ConfigError("order must be 1 or 2");
  if (cfg.frame_sample_count && *cfg.frame_sample_count < 1) {
    throw ConfigError("sample_frames must be a positive integer");
  }
}

double temporal_weight(int i, int n) {
  if (n < 1 || i < 1 || i > n) {
    throw DomainError("frame index " + std::to_string(i) + " outside [1, " + std::to_string(n) + "]");
  }
  return static_cast<double>(n - i + 1) / static_cast<double>(n);
}

std::vector<int> VcdReport::evaluated_indices() const {
  std::vector<int> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(f.index);
  return out;
}

std::vector<int> select_frame_indices(int frame_count, int cond_index, std::optional<int> k,
                                      std::uint64_t seed) {
  std::vector<int> candidates;
  for (int i = 1; i <= frame_count; ++i) {
    if (i != cond_index) candidates.push_back(i);
  }
  if (!k) return candidates;
  if (*k < 1 || *k > frame_count - 1) {
    throw ConfigError("sample_frames K=" + std::to_string(*k) + " must lie in [1, N-1] = [1, " +
                      std::to_string(frame_count - 1) + "]");
  }
  Rng rng(seed);
  const auto picks = sample_without_replacement(candidates.size(), static_cast<std::size_t>(*k), rng);
  std::vector<int> out;
  out.reserve(picks.size());
  for (auto p : picks) out.push_back(candidates[p]);
  return out;
}

Scorer::Scorer(MetricConfig cfg) : cfg_(std::move(cfg)) {
  validate(cfg_);
  encoder_ = std::make_shared<const Encoder>(Encoder::build(cfg_.encoder));
}

Scorer::Scorer(MetricConfig cfg, Encoder encoder)
    : cfg_(std::move(cfg)), encoder_(std::make_shared<const Encoder>(std::move(encoder))) {
  validate(cfg_);
}

namespace {

std::vector<double> sorted_scalars(PointCloud cloud) {
  std::sort(cloud.points.begin(), cloud.points.end());
  return std::move(cloud.points);
}

// Root-mean-square difference of two equally sized sorted sequences.
double sorted_l2(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) throw ShapeError("L2 term needs equal, non-empty coefficient sets");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.size()));
}

}  // namespace

Scorer::Prepared Scorer::prepare(const Frame& frame, Variant variant) const {
  Prepared out;
  out.height = frame.height();
  out.width = frame.width();
  out.channels = frame.channels();
  for (const auto& map : encoder_->encode(frame)) {
    Prepared::Tap tap;
    if (variant == Variant::vcd_feat) {
      tap.feature = project_sorted(feature_points(map, cfg_.mode), cfg_.swd);
    } else {
      const auto spectrum = dft2(map);
      if (variant == Variant::vcd_l2) {
        tap.amplitude_scalar = sorted_scalars(amplitude_points(spectrum, DistributionMode::scalar));
        tap.phase_scalar = sorted_scalars(phase_points(spectrum, DistributionMode::scalar, cfg_.eps_rel));
      } else {
        if (variant != Variant::phase_only) tap.amplitude = project_sorted(amplitude_points(spectrum, cfg_.mode), cfg_.swd);
        if (variant != Variant::amp_only) tap.phase = project_sorted(phase_points(spectrum, cfg_.mode, cfg_.eps_rel), cfg_.swd);
      }
    }
    out.taps.push_back(std::move(tap));
  }
  return out;
}

std::pair<double, double> Scorer::terms(const Prepared& a, const Prepared& b, Variant variant) const {
  if (a.height != b.height || a.width != b.width || a.channels != b.channels || a.taps.size() != b.taps.size()) {
    throw ShapeError("frames differ in shape: " + std::to_string(a.height) + "x" + std::to_string(a.width) + "x" +
                     std::to_string(a.channels) + " vs " + std::to_string(b.height) + "x" +
                     std::to_string(b.width) + "x" + std::to_string(b.channels));
  }
  double amp = 0.0;
  double phase = 0.0;
  for (std::size_t t = 0; t < a.taps.size(); ++t) {
    const auto& ta = a.taps[t];
    const auto& tb = b.taps[t];
    switch (variant) {
      case Variant::vcd:
        amp += sliced_wd(ta.amplitude, tb.amplitude);
        phase += sliced_wd(ta.phase, tb.phase);
        break;
      case Variant::amp_only:
        amp += sliced_wd(ta.amplitude, tb.amplitude);
        break;
      case Variant::phase_only:
        phase += sliced_wd(ta.phase, tb.phase);
        break;
      case Variant::vcd_l2:
        amp += sorted_l2(ta.amplitude_scalar, tb.amplitude_scalar);
        phase += sorted_l2(ta.phase_scalar, tb.phase_scalar);
        break;
      case Variant::vcd_feat:
        amp += sliced_wd(ta.feature, tb.feature);
        break;
    }
  }
  if (cfg_.tap_combine == TapCombine::mean && !a.taps.empty()) {
    amp /= static_cast<double>(a.taps.size());
    phase /= static_cast<double>(a.taps.size());
  }
  return {amp, phase};
}

double Scorer::fdl(const Frame& u, const Frame& v) const {
  const auto [amp, phase] = terms(prepare(u), prepare(v), Variant::vcd);
  return amp + cfg_.alpha * phase;
}

FrameScore Scorer::score_frame(const Prepared& cond, const Frame& frame, int i, int n, Variant variant) const {
  FrameScore s;
  s.index = i;
  s.weight = temporal_weight(i, n);
  std::tie(s.amplitude, s.phase) = terms(cond, prepare(frame, variant), variant);
  const double base = s.amplitude + cfg_.alpha * s.phase;
  s.total = cfg_.use_temporal_weight ? s.weight * base : base;
  return s;
}

FrameScore Scorer::score_frame(const Frame& cond, const Frame& frame, int i, int n, Variant variant) const {
  return score_frame(prepare(cond, variant), frame, i, n, variant);
}

VcdReport Scorer::score_video(const Video& video, Variant variant, const Frame* cond_override) const {
  const int n = video.frame_count();
  const auto indices = select_frame_indices(n, video.cond_index(), cfg_.frame_sample_count, cfg_.sample_seed);

  Frame cond = video.cond();
  if (cond_override != nullptr) {
    const Frame& ref = video.frame(1);
    if (cond_override->channels() != ref.channels()) {
      throw ShapeError("conditioning image has " + std::to_string(cond_override->channels()) +
                       " channels, video frames have " + std::to_string(ref.channels()));
    }
    cond = resize_bilinear(*cond_override, ref.height(), ref.width());
  }
  const auto prepared = prepare(cond, variant);

  VcdReport report;
  report.variant = variant;
  report.config = cfg_;
  report.frame_count = n;
  report.cond_index = video.cond_index();
  report.frames.resize(indices.size());
  parallel_for(indices.size(), worker_count(), [&](std::size_t k) {
    report.frames[k] = score_frame(prepared, video.frame(indices[k]), indices[k], n, variant);
  });
  for (const auto& f : report.frames) report.sum += f.total;
  report.mean = report.frames.empty() ? 0.0 : report.sum / static_cast<double>(report.frames.size());
  return report;
}

double fdl(const Frame& u, const Frame& v, const MetricConfig& cfg) { return Scorer(cfg).fdl(u, v); }

FrameScore vcd_frame(const Frame& cond, const Frame& frame, int i, int n, const MetricConfig& cfg) {
  return Scorer(cfg).score_frame(cond, frame, i, n, Variant::vcd);
}

FrameScore vcd_variant(const Frame& cond, const Frame& frame, int i, int n, const MetricConfig& cfg,
                       Variant variant) {
  return Scorer(cfg).score_frame(cond, frame, i, n, variant);
}

VcdReport vcd_video(const Video& video, const MetricConfig& cfg, Variant variant) {
  return Scorer(cfg).score_video(video, variant);
}

}  // namespace vcd
