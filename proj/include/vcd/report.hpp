#pragma once

#include <string>

#include "vcd/metrics.hpp"

namespace vcd {

/// {variant, config, frames:[{i, amp, phase, weight, total}], sum, mean}
/// with fixed key order. Output is a pure function of the report.
std::string report_to_json(const VcdReport& report);
/// Header `i,amp,phase,weight,total`, one row per scored frame, %.17g.
std::string report_to_csv(const VcdReport& report);
std::string config_to_json(const MetricConfig& cfg);

}  // namespace vcd
