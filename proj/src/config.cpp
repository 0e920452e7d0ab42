#include "vcd/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "vcd/error.hpp"

namespace vcd {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& text, const std::string& key) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError("bad value '" + text + "' for " + key);
  return value;
}

bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("bad boolean '" + text + "' for " + key);
}

bool is_none(const std::string& text) { return text.empty() || text == "none"; }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void apply(MetricConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "encoder") {
    cfg.encoder.kind = parse_encoder_kind(value);
  } else if (key == "taps") {
    cfg.encoder.taps = split_list(value);
  } else if (key == "encoder_seed") {
    if (is_none(value)) cfg.encoder.seed.reset();
    else cfg.encoder.seed = parse_number<std::uint64_t>(value, key);
  } else if (key == "weights") {
    if (is_none(value)) cfg.encoder.weights_path.reset();
    else cfg.encoder.weights_path = value;
  } else if (key == "mode") {
    cfg.mode = parse_distribution_mode(value);
  } else if (key == "projections") {
    cfg.swd.num_projections = parse_number<int>(value, key);
  } else if (key == "seed") {
    cfg.swd.seed = parse_number<std::uint64_t>(value, key);
  } else if (key == "order") {
    cfg.swd.order = parse_number<int>(value, key);
  } else if (key == "alpha") {
    cfg.alpha = parse_number<double>(value, key);
  } else if (key == "eps_rel") {
    cfg.eps_rel = parse_number<double>(value, key);
  } else if (key == "temporal_weight") {
    cfg.use_temporal_weight = parse_bool(value, key);
  } else if (key == "sample_frames") {
    if (is_none(value)) cfg.frame_sample_count.reset();
    else cfg.frame_sample_count = parse_number<int>(value, key);
  } else if (key == "tap_combine") {
    cfg.tap_combine = parse_tap_combine(value);
  } else if (key == "sample_seed") {
    cfg.sample_seed = parse_number<std::uint64_t>(value, key);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

}  // namespace

MetricConfig parse_config_text(const std::string& text, MetricConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    try {
      apply(base, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  validate(base);
  return base;
}

MetricConfig load_config_file(const std::filesystem::path& path, MetricConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

std::string format_config_text(const MetricConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "encoder = " << to_string(cfg.encoder.kind) << '\n';
  out << "taps = ";
  for (std::size_t k = 0; k < cfg.encoder.taps.size(); ++k) out << (k ? "," : "") << cfg.encoder.taps[k];
  out << '\n';
  out << "encoder_seed = " << (cfg.encoder.seed ? std::to_string(*cfg.encoder.seed) : "none") << '\n';
  out << "weights = " << (cfg.encoder.weights_path ? cfg.encoder.weights_path->string() : "none") << '\n';
  out << "mode = " << to_string(cfg.mode) << '\n';
  out << "projections = " << cfg.swd.num_projections << '\n';
  out << "seed = " << cfg.swd.seed << '\n';
  out << "order = " << cfg.swd.order << '\n';
  out << "alpha = " << cfg.alpha << '\n';
  out << "eps_rel = " << cfg.eps_rel << '\n';
  out << "temporal_weight = " << (cfg.use_temporal_weight ? "true" : "false") << '\n';
  out << "sample_frames = " << (cfg.frame_sample_count ? std::to_string(*cfg.frame_sample_count) : "none")
      << '\n';
  out << "tap_combine = " << to_string(cfg.tap_combine) << '\n';
  out << "sample_seed = " << cfg.sample_seed << '\n';
  return out.str();
}

}  // namespace vcd
