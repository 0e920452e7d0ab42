#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vcd/frame.hpp"

namespace vcd {

enum class EncoderKind { identity, random_conv, vgg_shallow };

std::string to_string(EncoderKind kind);
/// Accepts "identity", "random"/"random_conv", "vgg"/"vgg_shallow".
EncoderKind parse_encoder_kind(const std::string& text);

struct EncoderSpec {
  EncoderKind kind = EncoderKind::identity;
  /// Empty means the kind's default tap set.
  std::vector<std::string> taps;
  std::optional<std::uint64_t> seed;            // random_conv
  std::optional<std::filesystem::path> weights_path;  // vgg_shallow
};

/// Tap names a kind understands, in network order.
std::vector<std::string> available_taps(EncoderKind kind);
/// The tap list actually used: `spec.taps` or the kind's defaults.
std::vector<std::string> effective_taps(const EncoderSpec& spec);

/// Channel-major activation volume emitted at a tap.
struct FeatureMap {
  std::string tap;
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;

  double& at(int c, int y, int x) {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  double at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  std::size_t plane_size() const { return static_cast<std::size_t>(height) * width; }
};

/// Channel-major copy of a frame.
FeatureMap to_feature_map(const Frame& frame, std::string tap = "input");

struct ConvLayer {
  std::string name;
  int out_channels = 0;
  int in_channels = 0;
  int kernel_height = 0;
  int kernel_width = 0;
  std::vector<float> kernel;  // [out][in][kh][kw]
  std::vector<float> bias;    // [out]
};

struct WeightBundle {
  std::vector<ConvLayer> layers;

  const ConvLayer* find(const std::string& name) const;
};

/// Shape-only row of the VGG19 convolutional stack.
struct LayerShape {
  std::string name;
  int out_channels;
  int in_channels;
  int kernel_height;
  int kernel_width;
};

/// conv1_1 .. conv5_1 of VGG19, in order.
const std::vector<LayerShape>& vgg19_shallow_layers();

/// Reads a VCDW file. For vgg_shallow specs the layers are checked against
/// the VGG19 table up to the deepest requested tap; other kinds only get the
/// generic checks (finite coefficients, chained channel counts).
WeightBundle load_weights(const std::filesystem::path& path, const EncoderSpec& spec);
void save_weights(const std::filesystem::path& path, const WeightBundle& bundle);

/// Spatial size at a vgg tap for a given input size (same-padding convs,
/// ceil-mode 2x2 pools between blocks).
std::pair<int, int> vgg_tap_size(const std::string& tap, int height, int width);

// Building blocks, exposed for testing.
FeatureMap conv2d_same(const FeatureMap& input, const ConvLayer& layer);
void relu_inplace(FeatureMap& map);
FeatureMap max_pool_2x2(const FeatureMap& input);

/// Immutable frame-to-features mapping with named taps.
class Encoder {
 public:
  /// Throws ConfigError when vgg_shallow lacks weights or random_conv lacks
  /// a seed, and IncompatibleWeightsError when the bundle does not cover
  /// the requested taps.
  static Encoder build(const EncoderSpec& spec,
                       std::optional<WeightBundle> weights = std::nullopt);

  /// One FeatureMap per tap, in the spec's tap order.
  std::vector<FeatureMap> encode(const Frame& frame) const;

  EncoderKind kind() const noexcept { return kind_; }
  const std::vector<std::string>& taps() const noexcept { return taps_; }

 private:
  enum class OpKind { conv, relu, pool, tap, standardize };
  struct Op {
    OpKind kind;
    int layer = -1;     // conv: index into layers_ (per input-channel variant)
    std::string name;   // tap
  };

  Encoder() = default;
  std::vector<FeatureMap> run(const Frame& frame) const;

  EncoderKind kind_ = EncoderKind::identity;
  std::vector<std::string> taps_;
  std::vector<Op> ops_;
  // random_conv keeps one first layer per admissible input channel count.
  std::shared_ptr<const std::vector<ConvLayer>> layers_;
  std::shared_ptr<const std::vector<ConvLayer>> layers_gray_;
};

}  // namespace vcd
