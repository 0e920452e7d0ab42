#include "vcd/encoder.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>

#include "vcd/error.hpp"
#include "vcd/rng.hpp"

namespace vcd {

namespace fs = std::filesystem;

namespace {

constexpr std::array<const char*, 5> kVggTaps = {"relu1_1", "relu2_1", "relu3_1", "relu4_1",
                                                 "relu5_1"};
constexpr std::array<double, 3> kImageMean = {0.485, 0.456, 0.406};
constexpr std::array<double, 3> kImageStd = {0.229, 0.224, 0.225};

// random_conv architecture: two conv3x3/relu/pool blocks.
constexpr int kRandomWidth1 = 8;
constexpr int kRandomWidth2 = 16;

int vgg_block_of_tap(const std::string& tap) {
  for (std::size_t b = 0; b < kVggTaps.size(); ++b) {
    if (tap == kVggTaps[b]) return static_cast<int>(b) + 1;
  }
  throw ConfigError("unknown vgg_shallow tap '" + tap + "'");
}

// Index into vgg19_shallow_layers() of the conv feeding relu<b>_1.
std::size_t vgg_layer_for_block(int block) {
  const auto& table = vgg19_shallow_layers();
  const std::string name = "conv" + std::to_string(block) + "_1";
  for (std::size_t k = 0; k < table.size(); ++k) {
    if (table[k].name == name) return k;
  }
  throw ConfigError("no layer " + name);
}

void check_taps(const EncoderSpec& spec, const std::vector<std::string>& taps) {
  if (taps.empty()) throw ConfigError("encoder tap list is empty");
  std::set<std::string> seen;
  const auto known = available_taps(spec.kind);
  for (const auto& t : taps) {
    if (!seen.insert(t).second) throw ConfigError("duplicate tap '" + t + "'");
    if (std::find(known.begin(), known.end(), t) == known.end()) {
      throw ConfigError("tap '" + t + "' not available for encoder " + to_string(spec.kind));
    }
  }
}

ConvLayer random_layer(const std::string& name, int out, int in, std::uint64_t seed, std::uint64_t tag) {
  ConvLayer layer{name, out, in, 3, 3, {}, {}};
  Rng rng(mix_seed(seed, tag));
  const double bound = std::sqrt(6.0 / (in * 9.0));
  layer.kernel.resize(static_cast<std::size_t>(out) * in * 9);
  for (auto& w : layer.kernel) w = static_cast<float>(rng.uniform(-bound, bound));
  layer.bias.resize(static_cast<std::size_t>(out));
  for (auto& b : layer.bias) b = static_cast<float>(rng.uniform(0.0, 0.1));
  return layer;
}

void validate_generic(const WeightBundle& bundle) {
  for (std::size_t k = 0; k < bundle.layers.size(); ++k) {
    const auto& l = bundle.layers[k];
    if (l.out_channels <= 0 || l.in_channels <= 0 || l.kernel_height <= 0 || l.kernel_width <= 0) {
      throw IncompatibleWeightsError("layer " + l.name + " has a zero dimension");
    }
    if (l.kernel.size() != static_cast<std::size_t>(l.out_channels) * l.in_channels *
                               l.kernel_height * l.kernel_width ||
        l.bias.size() != static_cast<std::size_t>(l.out_channels)) {
      throw IncompatibleWeightsError("layer " + l.name + " coefficient count does not match shape");
    }
    for (float v : l.kernel) {
      if (!std::isfinite(v)) throw ValueError("non-finite kernel coefficient in layer " + l.name);
    }
    for (float v : l.bias) {
      if (!std::isfinite(v)) throw ValueError("non-finite bias coefficient in layer " + l.name);
    }
    if (k > 0 && l.in_channels != bundle.layers[k - 1].out_channels) {
      throw IncompatibleWeightsError("layer " + l.name + " expects " + std::to_string(l.in_channels) +
                                     " input channels but previous layer emits " +
                                     std::to_string(bundle.layers[k - 1].out_channels));
    }
  }
}

// Checks the bundle against the VGG19 table and returns how many table
// layers are needed for `taps`.
std::size_t validate_vgg(const WeightBundle& bundle, const std::vector<std::string>& taps) {
  const auto& table = vgg19_shallow_layers();
  int deepest = 1;
  for (const auto& t : taps) deepest = std::max(deepest, vgg_block_of_tap(t));
  const std::size_t needed = vgg_layer_for_block(deepest) + 1;
  if (bundle.layers.size() > table.size()) {
    throw IncompatibleWeightsError("weight file has more layers than the VGG19 shallow stack");
  }
  for (std::size_t k = 0; k < bundle.layers.size(); ++k) {
    const auto& l = bundle.layers[k];
    const auto& ref = table[k];
    if (l.name != ref.name || l.out_channels != ref.out_channels || l.in_channels != ref.in_channels ||
        l.kernel_height != ref.kernel_height || l.kernel_width != ref.kernel_width) {
      throw IncompatibleWeightsError("layer " + std::to_string(k) + " is " + l.name + " " +
                                     std::to_string(l.out_channels) + "x" + std::to_string(l.in_channels) +
                                     "x" + std::to_string(l.kernel_height) + "x" +
                                     std::to_string(l.kernel_width) + ", expected " + ref.name + " " +
                                     std::to_string(ref.out_channels) + "x" +
                                     std::to_string(ref.in_channels) + "x3x3");
    }
  }
  if (bundle.layers.size() < needed) {
    throw IncompatibleWeightsError("weight file stops at layer " + std::to_string(bundle.layers.size()) +
                                   " but tap set needs " + table[needed - 1].name);
  }
  return needed;
}

}  // namespace

std::string to_string(EncoderKind kind) {
  switch (kind) {
    case EncoderKind::identity: return "identity";
    case EncoderKind::random_conv: return "random_conv";
    case EncoderKind::vgg_shallow: return "vgg_shallow";
  }
  return "?";
}

EncoderKind parse_encoder_kind(const std::string& text) {
  if (text == "identity") return EncoderKind::identity;
  if (text == "random" || text == "random_conv") return EncoderKind::random_conv;
  if (text == "vgg" || text == "vgg_shallow") return EncoderKind::vgg_shallow;
  throw ConfigError("unknown encoder kind '" + text + "'");
}

std::vector<std::string> available_taps(EncoderKind kind) {
  switch (kind) {
    case EncoderKind::identity: return {"input"};
    case EncoderKind::random_conv: return {"relu1", "relu2"};
    case EncoderKind::vgg_shallow: return {kVggTaps.begin(), kVggTaps.end()};
  }
  return {};
}

std::vector<std::string> effective_taps(const EncoderSpec& spec) {
  return spec.taps.empty() ? available_taps(spec.kind) : spec.taps;
}

const std::vector<LayerShape>& vgg19_shallow_layers() {
  static const std::vector<LayerShape> table = {
      {"conv1_1", 64, 3, 3, 3},    {"conv1_2", 64, 64, 3, 3},   {"conv2_1", 128, 64, 3, 3},
      {"conv2_2", 128, 128, 3, 3}, {"conv3_1", 256, 128, 3, 3}, {"conv3_2", 256, 256, 3, 3},
      {"conv3_3", 256, 256, 3, 3}, {"conv3_4", 256, 256, 3, 3}, {"conv4_1", 512, 256, 3, 3},
      {"conv4_2", 512, 512, 3, 3}, {"conv4_3", 512, 512, 3, 3}, {"conv4_4", 512, 512, 3, 3},
      {"conv5_1", 512, 512, 3, 3},
  };
  return table;
}

const ConvLayer* WeightBundle::find(const std::string& name) const {
  for (const auto& l : layers) {
    if (l.name == name) return &l;
  }
  return nullptr;
}

FeatureMap to_feature_map(const Frame& frame, std::string tap) {
  FeatureMap map{std::move(tap), frame.channels(), frame.height(), frame.width(), {}};
  map.data.resize(frame.size());
  for (int c = 0; c < frame.channels(); ++c)
    for (int y = 0; y < frame.height(); ++y)
      for (int x = 0; x < frame.width(); ++x) map.at(c, y, x) = frame.at(y, x, c);
  return map;
}

WeightBundle load_weights(const fs::path& path, const EncoderSpec& spec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                         std::istreambuf_iterator<char>()};
  std::size_t pos = 0;
  auto need = [&](std::size_t n) {
    if (bytes.size() - pos < n) throw CorruptFileError("truncated weight file " + path.string());
  };
  auto u32 = [&] {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(bytes[pos + k]) << (8 * k);
    pos += 4;
    return v;
  };
  auto f32s = [&](std::size_t n) {
    need(n * 4);
    std::vector<float> out(n);
    for (auto& v : out) v = std::bit_cast<float>(u32());
    return out;
  };

  if (bytes.size() < 4 || std::memcmp(bytes.data(), "VCDW", 4) != 0) {
    throw FormatError("not a VCDW weight file: " + path.string());
  }
  pos = 4;
  const auto version = u32();
  if (version != 1) throw FormatError("unsupported VCDW version " + std::to_string(version));
  const auto count = u32();
  WeightBundle bundle;
  for (std::uint32_t k = 0; k < count; ++k) {
    const auto name_len = u32();
    if (name_len > 4096) throw CorruptFileError("implausible layer name length in " + path.string());
    need(name_len);
    ConvLayer layer;
    layer.name.assign(reinterpret_cast<const char*>(bytes.data() + pos), name_len);
    pos += name_len;
    const auto out = u32();
    const auto inc = u32();
    const auto kh = u32();
    const auto kw = u32();
    const auto coeffs = static_cast<unsigned long long>(out) * inc * kh * kw;
    if (coeffs > (bytes.size() - pos) / 4) throw CorruptFileError("truncated weight file " + path.string());
    layer.out_channels = static_cast<int>(out);
    layer.in_channels = static_cast<int>(inc);
    layer.kernel_height = static_cast<int>(kh);
    layer.kernel_width = static_cast<int>(kw);
    layer.kernel = f32s(static_cast<std::size_t>(coeffs));
    layer.bias = f32s(out);
    bundle.layers.push_back(std::move(layer));
  }
  validate_generic(bundle);
  if (spec.kind == EncoderKind::vgg_shallow) {
    const auto taps = effective_taps(spec);
    check_taps(spec, taps);
    validate_vgg(bundle, taps);
  }
  return bundle;
}

void save_weights(const fs::path& path, const WeightBundle& bundle) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  auto u32 = [&](std::uint32_t v) {
    std::array<char, 4> b{};
    for (int k = 0; k < 4; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xff);
    out.write(b.data(), 4);
  };
  out.write("VCDW", 4);
  u32(1);
  u32(static_cast<std::uint32_t>(bundle.layers.size()));
  for (const auto& l : bundle.layers) {
    u32(static_cast<std::uint32_t>(l.name.size()));
    out.write(l.name.data(), static_cast<std::streamsize>(l.name.size()));
    u32(static_cast<std::uint32_t>(l.out_channels));
    u32(static_cast<std::uint32_t>(l.in_channels));
    u32(static_cast<std::uint32_t>(l.kernel_height));
    u32(static_cast<std::uint32_t>(l.kernel_width));
    for (float v : l.kernel) u32(std::bit_cast<std::uint32_t>(v));
    for (float v : l.bias) u32(std::bit_cast<std::uint32_t>(v));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::pair<int, int> vgg_tap_size(const std::string& tap, int height, int width) {
  const int block = vgg_block_of_tap(tap);
  for (int b = 1; b < block; ++b) {
    height = (height + 1) / 2;
    width = (width + 1) / 2;
  }
  return {height, width};
}

FeatureMap conv2d_same(const FeatureMap& input, const ConvLayer& layer) {
  if (input.channels != layer.in_channels) {
    throw ShapeError("layer " + layer.name + " expects " + std::to_string(layer.in_channels) +
                     " channels, got " + std::to_string(input.channels));
  }
  const int h = input.height;
  const int w = input.width;
  const int kh = layer.kernel_height;
  const int kw = layer.kernel_width;
  const int ph = (kh - 1) / 2;
  const int pw = (kw - 1) / 2;
  FeatureMap out{input.tap, layer.out_channels, h, w, {}};
  out.data.assign(static_cast<std::size_t>(layer.out_channels) * h * w, 0.0);
  for (int o = 0; o < layer.out_channels; ++o) {
    double* dst = out.data.data() + static_cast<std::size_t>(o) * h * w;
    std::fill(dst, dst + static_cast<std::size_t>(h) * w, static_cast<double>(layer.bias[o]));
    for (int i = 0; i < layer.in_channels; ++i) {
      const double* src = input.data.data() + static_cast<std::size_t>(i) * h * w;
      for (int ky = 0; ky < kh; ++ky) {
        const int dy = ky - ph;
        const int y_lo = std::max(0, -dy);
        const int y_hi = std::min(h, h - dy);
        for (int kx = 0; kx < kw; ++kx) {
          const double wgt =
              layer.kernel[((static_cast<std::size_t>(o) * layer.in_channels + i) * kh + ky) * kw + kx];
          if (wgt == 0.0) continue;
          const int dx = kx - pw;
          const int x_lo = std::max(0, -dx);
          const int x_hi = std::min(w, w - dx);
          for (int y = y_lo; y < y_hi; ++y) {
            double* row = dst + static_cast<std::size_t>(y) * w;
            const double* in_row = src + static_cast<std::size_t>(y + dy) * w + dx;
            for (int x = x_lo; x < x_hi; ++x) row[x] += wgt * in_row[x];
          }
        }
      }
    }
  }
  return out;
}

void relu_inplace(FeatureMap& map) {
  for (auto& v : map.data) v = v > 0.0 ? v : 0.0;
}

FeatureMap max_pool_2x2(const FeatureMap& input) {
  const int oh = (input.height + 1) / 2;
  const int ow = (input.width + 1) / 2;
  FeatureMap out{input.tap, input.channels, oh, ow, {}};
  out.data.resize(static_cast<std::size_t>(input.channels) * oh * ow);
  for (int c = 0; c < input.channels; ++c) {
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) {
        double m = -std::numeric_limits<double>::infinity();
        for (int yy = 2 * y; yy < std::min(2 * y + 2, input.height); ++yy)
          for (int xx = 2 * x; xx < std::min(2 * x + 2, input.width); ++xx) m = std::max(m, input.at(c, yy, xx));
        out.at(c, y, x) = m;
      }
    }
  }
  return out;
}

Encoder Encoder::build(const EncoderSpec& spec, std::optional<WeightBundle> weights) {
  Encoder enc;
  enc.kind_ = spec.kind;
  enc.taps_ = effective_taps(spec);
  check_taps(spec, enc.taps_);

  auto wanted = [&](const std::string& tap) {
    return std::find(enc.taps_.begin(), enc.taps_.end(), tap) != enc.taps_.end();
  };
  // Drops trailing ops past the last requested tap.
  auto trim = [&] {
    while (!enc.ops_.empty() && enc.ops_.back().kind != OpKind::tap) enc.ops_.pop_back();
  };

  switch (spec.kind) {
    case EncoderKind::identity:
      enc.ops_.push_back({OpKind::tap, -1, "input"});
      break;

    case EncoderKind::random_conv: {
      if (!spec.seed) throw ConfigError("random_conv encoder requires a seed");
      const auto seed = *spec.seed;
      auto block2 = random_layer("conv2", kRandomWidth2, kRandomWidth1, seed, 2);
      enc.layers_ = std::make_shared<const std::vector<ConvLayer>>(
          std::vector<ConvLayer>{random_layer("conv1", kRandomWidth1, 3, seed, 1), block2});
      enc.layers_gray_ = std::make_shared<const std::vector<ConvLayer>>(
          std::vector<ConvLayer>{random_layer("conv1", kRandomWidth1, 1, seed, 11), block2});
      const char* names[] = {"relu1", "relu2"};
      for (int b = 0; b < 2; ++b) {
        enc.ops_.push_back({OpKind::conv, b, {}});
        enc.ops_.push_back({OpKind::relu, -1, {}});
        if (wanted(names[b])) enc.ops_.push_back({OpKind::tap, -1, names[b]});
        enc.ops_.push_back({OpKind::pool, -1, {}});
      }
      trim();
      break;
    }

    case EncoderKind::vgg_shallow: {
      if (!weights) {
        if (!spec.weights_path) throw ConfigError("vgg_shallow encoder requires weights");
        weights = load_weights(*spec.weights_path, spec);
      } else {
        validate_generic(*weights);
      }
      const std::size_t needed = validate_vgg(*weights, enc.taps_);
      weights->layers.resize(needed);
      enc.layers_ = std::make_shared<const std::vector<ConvLayer>>(std::move(weights->layers));
      enc.ops_.push_back({OpKind::standardize, -1, {}});
      const auto& table = vgg19_shallow_layers();
      for (std::size_t k = 0; k < needed; ++k) {
        const auto& name = table[k].name;  // convB_J
        const int block = name[4] - '0';
        const bool first_in_block = name.substr(5) == "_1";
        if (first_in_block && block > 1) enc.ops_.push_back({OpKind::pool, -1, {}});
        enc.ops_.push_back({OpKind::conv, static_cast<int>(k), {}});
        enc.ops_.push_back({OpKind::relu, -1, {}});
        const std::string tap = "relu" + std::to_string(block) + "_1";
        if (first_in_block && wanted(tap)) enc.ops_.push_back({OpKind::tap, -1, tap});
      }
      trim();
      break;
    }
  }
  return enc;
}

std::vector<FeatureMap> Encoder::run(const Frame& frame) const {
  if (kind_ == EncoderKind::vgg_shallow && frame.channels() != 3) {
    throw ShapeError("vgg_shallow encoder needs 3-channel frames, got " +
                     std::to_string(frame.channels()));
  }
  const auto* layers = (kind_ == EncoderKind::random_conv && frame.channels() == 1)
                           ? layers_gray_.get()
                           : layers_.get();
  std::vector<FeatureMap> captured;
  FeatureMap cur = to_feature_map(frame);
  for (const auto& op : ops_) {
    switch (op.kind) {
      case OpKind::standardize:
        for (int c = 0; c < cur.channels; ++c) {
          double* plane = cur.data.data() + static_cast<std::size_t>(c) * cur.plane_size();
          for (std::size_t k = 0; k < cur.plane_size(); ++k) plane[k] = (plane[k] - kImageMean[c]) / kImageStd[c];
        }
        break;
      case OpKind::conv:
        cur = conv2d_same(cur, (*layers)[static_cast<std::size_t>(op.layer)]);
        break;
      case OpKind::relu:
        relu_inplace(cur);
        break;
      case OpKind::pool:
        cur = max_pool_2x2(cur);
        break;
      case OpKind::tap:
        captured.push_back(cur);
        captured.back().tap = op.name;
        break;
    }
  }
  return captured;
}

std::vector<FeatureMap> Encoder::encode(const Frame& frame) const {
  auto captured = run(frame);
  std::vector<FeatureMap> ordered;
  ordered.reserve(taps_.size());
  for (const auto& t : taps_) {
    auto it = std::find_if(captured.begin(), captured.end(), [&](const FeatureMap& m) { return m.tap == t; });
    ordered.push_back(std::move(*it));
  }
  return ordered;
}

}  // namespace vcd
