#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vcd/frame.hpp"
#include "vcd/metrics.hpp"

namespace vcd {

/// Toy generator parameters for one frame: circular shift then gain/bias,
/// clamped to [0,1].
struct FrameParams {
  int dx = 0;
  int dy = 0;
  double gain = 1.0;
  double bias = 0.0;

  friend bool operator==(const FrameParams&, const FrameParams&) = default;
};

/// Parameters for frames 2..N; frame 1 is always the conditioning image.
struct ParamVideo {
  std::vector<FrameParams> frames;

  int frame_count() const noexcept { return static_cast<int>(frames.size()) + 1; }
  static ParamVideo identity(int frame_count);
  static ParamVideo uniform_shift(int frame_count, int dx, int dy);

  friend bool operator==(const ParamVideo&, const ParamVideo&) = default;
};

/// Optional seeded per-frame Gaussian noise added before clamping. With
/// samples > 1 the objective is the average over that many fixed draws.
struct NoiseModel {
  double sigma = 0.0;
  int samples = 1;
  std::uint64_t seed = 0;
};

/// Deterministic textured test image in [0.1, 0.9]: a few random low
/// frequency sinusoids per channel plus fine-grained uniform detail.
Frame make_textured_frame(int height, int width, int channels, std::uint64_t seed);

/// Circular shift: out(y, x) = in((y - dy) mod H, (x - dx) mod W).
Frame circular_shift(const Frame& frame, int dx, int dy);

/// Frame 1 = cond; frame i = clamp(g_i * shift(cond) + b_i [+ noise]).
/// DomainError when |dx| >= W or |dy| >= H.
Video render_param_video(const Frame& cond, const ParamVideo& params,
                         const NoiseModel& noise = {}, int noise_sample = 0);

/// Mean per-frame VCD total of the rendered video (averaged over noise
/// samples when noise is enabled). Reward is the negation.
double objective(const Frame& cond, const ParamVideo& params, const Scorer& scorer,
                 const NoiseModel& noise = {});
double objective(const Frame& cond, const ParamVideo& params, const MetricConfig& cfg);

struct OptimizerOptions {
  double initial_step = 0.25;
  double min_step = 1e-3;
  /// Neighbourhood probes (+-1 in dx, dy) after each accepted shift move.
  bool local_shift_moves = true;
  /// After an accepted shift move, also try that shift on every frame.
  bool propagate_shifts = true;
  NoiseModel noise;
};

struct OptStep {
  int evaluation = 0;
  double objective = 0.0;
  bool accepted = false;
  std::string move;  // "init", "shift", "propagate", "gain", "bias"
};

struct OptTrace {
  std::uint64_t seed = 0;
  int budget = 0;
  std::vector<OptStep> steps;  // one per objective evaluation
  ParamVideo initial;
  ParamVideo best;
  double initial_objective = 0.0;
  double best_objective = 0.0;

  int evaluations() const noexcept { return static_cast<int>(steps.size()); }
  /// Objectives of accepted steps, in order (first is the initial point).
  std::vector<double> accepted_objectives() const;
};

/// Derivative-free minimisation of the objective: seeded random search with
/// restarts over integer shifts (each frame's shift grid is visited in a
/// random order without repetition, an accepted shift is also tried on all
/// frames at once) interleaved with coordinate descent
/// with step halving over gain and bias. `budget` counts objective
/// evaluations, including the initial one.
OptTrace optimize(const Frame& cond, const ParamVideo& init, int budget, std::uint64_t seed,
                  const Scorer& scorer, const OptimizerOptions& options = {});
OptTrace optimize(const Frame& cond, const ParamVideo& init, int budget, std::uint64_t seed,
                  const MetricConfig& cfg, const OptimizerOptions& options = {});

/// {seed, budget, objectives:[...], best:{params, objective}} plus
/// accepted flags and the initial objective.
std::string trace_to_json(const OptTrace& trace);

}  // namespace vcd
