#include "vcd/report.hpp"

#include <cstdio>

#include "json.hpp"

namespace vcd {

using ojson = nlohmann::ordered_json;

namespace {

ojson config_json(const MetricConfig& cfg) {
  ojson enc;
  enc["kind"] = to_string(cfg.encoder.kind);
  enc["taps"] = effective_taps(cfg.encoder);
  enc["seed"] = cfg.encoder.seed ? ojson(*cfg.encoder.seed) : ojson(nullptr);
  enc["weights"] = cfg.encoder.weights_path ? ojson(cfg.encoder.weights_path->string()) : ojson(nullptr);

  ojson j;
  j["encoder"] = enc;
  j["mode"] = to_string(cfg.mode);
  j["projections"] = cfg.swd.num_projections;
  j["seed"] = cfg.swd.seed;
  j["order"] = cfg.swd.order;
  j["alpha"] = cfg.alpha;
  j["eps_rel"] = cfg.eps_rel;
  j["temporal_weight"] = cfg.use_temporal_weight;
  j["sample_frames"] = cfg.frame_sample_count ? ojson(*cfg.frame_sample_count) : ojson(nullptr);
  j["tap_combine"] = to_string(cfg.tap_combine);
  j["sample_seed"] = cfg.sample_seed;
  return j;
}

}  // namespace

std::string config_to_json(const MetricConfig& cfg) { return config_json(cfg).dump(2); }

std::string report_to_json(const VcdReport& report) {
  ojson j;
  j["variant"] = to_string(report.variant);
  j["config"] = config_json(report.config);
  ojson frames = ojson::array();
  for (const auto& f : report.frames) {
    ojson row;
    row["i"] = f.index;
    row["amp"] = f.amplitude;
    row["phase"] = f.phase;
    row["weight"] = f.weight;
    row["total"] = f.total;
    frames.push_back(std::move(row));
  }
  j["frames"] = std::move(frames);
  j["sum"] = report.sum;
  j["mean"] = report.mean;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const VcdReport& report) {
  std::string out = "i,amp,phase,weight,total\n";
  char line[160];
  for (const auto& f : report.frames) {
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g\n", f.index, f.amplitude, f.phase, f.weight,
                  f.total);
    out += line;
  }
  return out;
}

}  // namespace vcd
