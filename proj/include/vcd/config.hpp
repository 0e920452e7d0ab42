#pragma once

#include <filesystem>
#include <string>

#include "vcd/metrics.hpp"

namespace vcd {

/// Applies `key = value` lines on top of `base`. Keys:
///   encoder, taps, encoder_seed, weights, mode, projections, seed, order,
///   alpha, eps_rel, temporal_weight, sample_frames, tap_combine, sample_seed
/// Blank lines and lines starting with '#' are ignored. Unknown keys and
/// malformed values raise ConfigError naming the line.
MetricConfig parse_config_text(const std::string& text, MetricConfig base = {});
MetricConfig load_config_file(const std::filesystem::path& path, MetricConfig base = {});

/// Inverse of parse_config_text for every field.
std::string format_config_text(const MetricConfig& cfg);

}  // namespace vcd
