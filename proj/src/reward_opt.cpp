#include "vcd/reward_opt.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "json.hpp"
#include "vcd/error.hpp"
#include "vcd/rng.hpp"

namespace vcd {

ParamVideo ParamVideo::identity(int frame_count) {
  return uniform_shift(frame_count, 0, 0);
}

ParamVideo ParamVideo::uniform_shift(int frame_count, int dx, int dy) {
  if (frame_count < 2) throw ArityError("a parametric video needs N >= 2 frames");
  ParamVideo p;
  p.frames.assign(static_cast<std::size_t>(frame_count - 1), FrameParams{dx, dy, 1.0, 0.0});
  return p;
}

Frame make_textured_frame(int height, int width, int channels, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> data(static_cast<std::size_t>(height) * width * channels);
  for (int c = 0; c < channels; ++c) {
    struct Wave {
      double fy, fx, phase, amp;
    };
    std::vector<Wave> waves;
    for (int k = 0; k < 3; ++k) {
      waves.push_back({static_cast<double>(rng.below(3)), static_cast<double>(1 + rng.below(3)),
                       rng.uniform(0.0, 6.283185307179586), rng.uniform(0.05, 0.12)});
    }
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        double v = 0.5;
        for (const auto& wv : waves) {
          v += wv.amp * std::sin(6.283185307179586 * (wv.fy * y / height + wv.fx * x / width) + wv.phase);
        }
        v += rng.uniform(-0.08, 0.08);
        data[(static_cast<std::size_t>(y) * width + x) * channels + c] = std::clamp(v, 0.1, 0.9);
      }
    }
  }
  return Frame(height, width, channels, std::move(data));
}

Frame circular_shift(const Frame& frame, int dx, int dy) {
  const int h = frame.height();
  const int w = frame.width();
  const int c = frame.channels();
  std::vector<double> out(frame.size());
  for (int y = 0; y < h; ++y) {
    const int sy = ((y - dy) % h + h) % h;
    for (int x = 0; x < w; ++x) {
      const int sx = ((x - dx) % w + w) % w;
      for (int ch = 0; ch < c; ++ch) {
        out[(static_cast<std::size_t>(y) * w + x) * c + ch] = frame.at(sy, sx, ch);
      }
    }
  }
  return Frame(h, w, c, std::move(out));
}

Video render_param_video(const Frame& cond, const ParamVideo& params, const NoiseModel& noise, int noise_sample) {
  std::vector<Frame> frames;
  frames.reserve(params.frames.size() + 1);
  frames.push_back(cond);
  for (std::size_t k = 0; k < params.frames.size(); ++k) {
    const auto& p = params.frames[k];
    if (std::abs(p.dx) >= cond.width() || std::abs(p.dy) >= cond.height()) {
      throw DomainError("shift (" + std::to_string(p.dx) + ", " + std::to_string(p.dy) + ") of frame " +
                        std::to_string(k + 2) + " exceeds the frame size");
    }
    if (!std::isfinite(p.gain) || !std::isfinite(p.bias)) throw DomainError("gain and bias must be finite");
    const Frame shifted = circular_shift(cond, p.dx, p.dy);
    std::vector<double> data(shifted.size());
    const bool noisy = noise.sigma > 0.0;
    Rng rng(mix_seed(noise.seed, static_cast<std::uint64_t>(noise_sample) * 65537u + k));
    for (std::size_t s = 0; s < data.size(); ++s) {
      double v = p.gain * shifted.data()[s] + p.bias;
      if (noisy) v += noise.sigma * rng.normal();
      data[s] = std::clamp(v, 0.0, 1.0);
    }
    frames.emplace_back(cond.height(), cond.width(), cond.channels(), std::move(data));
  }
  return Video(std::move(frames), 1);
}

double objective(const Frame& cond, const ParamVideo& params, const Scorer& scorer, const NoiseModel& noise) {
  const int samples = noise.sigma > 0.0 ? std::max(1, noise.samples) : 1;
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    acc += scorer.score_video(render_param_video(cond, params, noise, s)).mean;
  }
  return acc / samples;
}

double objective(const Frame& cond, const ParamVideo& params, const MetricConfig& cfg) {
  return objective(cond, params, Scorer(cfg));
}

std::vector<double> OptTrace::accepted_objectives() const {
  std::vector<double> out;
  for (const auto& s : steps) {
    if (s.accepted) out.push_back(s.objective);
  }
  return out;
}

namespace {

// Signed representative of a circular shift in (-n/2, n/2].
int wrap_shift(int s, int n) {
  s = ((s % n) + n) % n;
  return s > n / 2 ? s - n : s;
}

struct FrameSearch {
  std::vector<std::pair<int, int>> order;  // shuffled shift grid
  std::size_t cursor = 0;
  std::set<std::pair<int, int>> visited;
  std::deque<std::pair<int, int>> probes;
  double gain_step = 0.0;
  double bias_step = 0.0;
};

}  // namespace

OptTrace optimize(const Frame& cond, const ParamVideo& init, int budget, std::uint64_t seed, const Scorer& scorer,
                  const OptimizerOptions& options) {
  if (budget < 1) throw ConfigError("optimizer budget must be >= 1");
  OptTrace trace;
  trace.seed = seed;
  trace.budget = budget;
  trace.initial = init;

  ParamVideo current = init;
  auto evaluate = [&](const ParamVideo& p, const char* move) {
    const double f = objective(cond, p, scorer, options.noise);
    trace.steps.push_back({static_cast<int>(trace.steps.size()) + 1, f, false, move});
    return f;
  };

  double f_cur = evaluate(current, "init");
  trace.steps.back().accepted = true;
  trace.initial_objective = f_cur;

  const int h = cond.height();
  const int w = cond.width();
  Rng rng(seed);
  std::vector<FrameSearch> search(current.frames.size());
  for (std::size_t j = 0; j < search.size(); ++j) {
    auto& s = search[j];
    for (int dy = 0; dy < h; ++dy)
      for (int dx = 0; dx < w; ++dx) s.order.emplace_back(wrap_shift(dx, w), wrap_shift(dy, h));
    for (std::size_t k = s.order.size(); k > 1; --k) {
      std::swap(s.order[k - 1], s.order[static_cast<std::size_t>(rng.below(k))]);
    }
    s.visited.insert({current.frames[j].dx, current.frames[j].dy});
    s.gain_step = options.initial_step;
    s.bias_step = options.initial_step;
  }

  auto budget_left = [&] { return trace.evaluations() < budget && f_cur > 0.0; };

  // Tries a candidate; accepts it if it strictly improves the objective.
  auto attempt = [&](const ParamVideo& candidate, const char* move) {
    const double f = evaluate(candidate, move);
    if (f < f_cur) {
      f_cur = f;
      current = candidate;
      trace.steps.back().accepted = true;
      return true;
    }
    return false;
  };

  auto shift_move = [&](std::size_t j) {
    auto& s = search[j];
    std::pair<int, int> next;
    bool found = false;
    while (!found && !s.probes.empty()) {
      next = s.probes.front();
      s.probes.pop_front();
      found = !s.visited.contains(next);
    }
    while (!found && s.cursor < s.order.size()) {
      next = s.order[s.cursor++];
      found = !s.visited.contains(next);
    }
    if (!found) return false;
    s.visited.insert(next);
    ParamVideo candidate = current;
    candidate.frames[j].dx = next.first;
    candidate.frames[j].dy = next.second;
    if (!attempt(candidate, "shift")) return true;
    if (options.propagate_shifts && budget_left()) {
      ParamVideo shared = current;
      bool differs = false;
      for (auto& p : shared.frames) {
        differs |= p.dx != next.first || p.dy != next.second;
        p.dx = next.first;
        p.dy = next.second;
      }
      if (differs) attempt(shared, "propagate");
    }
    if (options.local_shift_moves) {
      const int nbr[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (const auto& d : nbr) {
        s.probes.emplace_back(wrap_shift(next.first + d[0], w), wrap_shift(next.second + d[1], h));
      }
    }
    return true;
  };

  // One coordinate-descent trial on gain or bias: +step, then -step, else halve.
  auto photometric_move = [&](std::size_t j, bool gain) {
    double& step = gain ? search[j].gain_step : search[j].bias_step;
    if (step < options.min_step) return false;
    for (double sign : {1.0, -1.0}) {
      if (!budget_left()) return true;
      ParamVideo candidate = current;
      (gain ? candidate.frames[j].gain : candidate.frames[j].bias) += sign * step;
      if (attempt(candidate, gain ? "gain" : "bias")) return true;
    }
    step *= 0.5;
    return true;
  };

  bool progressed = true;
  while (budget_left() && progressed) {
    progressed = false;
    for (std::size_t j = 0; j < search.size() && budget_left(); ++j) {
      progressed |= shift_move(j);
      if (budget_left()) progressed |= photometric_move(j, true);
      if (budget_left()) progressed |= photometric_move(j, false);
    }
  }

  trace.best = current;
  trace.best_objective = f_cur;
  return trace;
}

OptTrace optimize(const Frame& cond, const ParamVideo& init, int budget, std::uint64_t seed, const MetricConfig& cfg,
                  const OptimizerOptions& options) {
  return optimize(cond, init, budget, seed, Scorer(cfg), options);
}

std::string trace_to_json(const OptTrace& trace) {
  using ojson = nlohmann::ordered_json;
  ojson j;
  j["seed"] = trace.seed;
  j["budget"] = trace.budget;
  ojson objectives = ojson::array();
  ojson accepted = ojson::array();
  for (const auto& s : trace.steps) {
    objectives.push_back(s.objective);
    accepted.push_back(s.accepted);
  }
  j["objectives"] = std::move(objectives);
  ojson params = ojson::array();
  for (std::size_t k = 0; k < trace.best.frames.size(); ++k) {
    const auto& p = trace.best.frames[k];
    params.push_back(ojson{{"i", k + 2}, {"dx", p.dx}, {"dy", p.dy}, {"gain", p.gain}, {"bias", p.bias}});
  }
  j["best"] = ojson{{"params", std::move(params)}, {"objective", trace.best_objective}};
  j["accepted"] = std::move(accepted);
  j["initial_objective"] = trace.initial_objective;
  j["reward"] = -trace.best_objective;
  return j.dump(2) + "\n";
}

}  // namespace vcd
