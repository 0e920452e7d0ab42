#include "vcd/c_api.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "json.hpp"
#include "vcd/config.hpp"
#include "vcd/error.hpp"
#include "vcd/report.hpp"

namespace {

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

char* error_json(const std::string& kind, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = message;
  j["kind"] = kind;
  return dup_string(j.dump());
}

}  // namespace

extern "C" char* vcd_score_buffer(const float* data, size_t length, uint32_t n, uint32_t h, uint32_t w,
                                  uint32_t c, const char* config_text) {
  try {
    if (data == nullptr && length != 0) return error_json("shape", "null buffer with non-zero length");
    const unsigned long long frame_len = static_cast<unsigned long long>(h) * w * c;
    if (static_cast<unsigned long long>(n) * frame_len != length) {
      return error_json("shape", "buffer length " + std::to_string(length) + " does not match N*H*W*C = " +
                                     std::to_string(n) + "*" + std::to_string(h) + "*" + std::to_string(w) +
                                     "*" + std::to_string(c));
    }
    const auto cfg = vcd::parse_config_text(config_text != nullptr ? config_text : "");
    std::vector<vcd::Frame> frames;
    frames.reserve(n);
    for (uint32_t i = 0; i < n; ++i) {
      const float* src = data + static_cast<std::size_t>(i) * frame_len;
      std::vector<double> samples(src, src + frame_len);
      frames.emplace_back(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c), std::move(samples));
    }
    const vcd::Video video(std::move(frames), 1);
    const vcd::Scorer scorer(cfg);
    return dup_string(vcd::report_to_json(scorer.score_video(video)));
  } catch (const vcd::Error& e) {
    return error_json(e.kind(), e.what());
  } catch (const std::exception& e) {
    return error_json("internal", e.what());
  } catch (...) {
    return error_json("internal", "unknown failure");
  }
}

extern "C" void vcd_free_string(char* text) { std::free(text); }
