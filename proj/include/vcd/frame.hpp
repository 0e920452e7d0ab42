#pragma once

#include <cstddef>
#include <vector>

namespace vcd {

/// Raster image with samples in [0,1], row-major, channel-last.
/// Samples are held in double precision; the on-disk formats carry 8-bit
/// or float32 samples, both of which convert exactly.
class Frame {
 public:
  Frame() = default;
  /// Throws ValueError if the invariants (sizes, channels in {1,3},
  /// finite samples in [0,1]) do not hold.
  Frame(int height, int width, int channels, std::vector<double> data);
  /// Constant-valued frame.
  Frame(int height, int width, int channels, double fill);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return data_.size(); }

  double at(int y, int x, int c) const noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  const std::vector<double>& data() const noexcept { return data_; }

  bool same_shape(const Frame& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ &&
           channels_ == other.channels_;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Ordered frame sequence, N >= 2, all frames the same shape.
/// `cond_index` is 1-based.
class Video {
 public:
  Video(std::vector<Frame> frames, int cond_index = 1);

  int frame_count() const noexcept { return static_cast<int>(frames_.size()); }
  int cond_index() const noexcept { return cond_index_; }
  /// 1-based access.
  const Frame& frame(int i) const { return frames_.at(static_cast<std::size_t>(i - 1)); }
  const Frame& cond() const { return frame(cond_index_); }
  const std::vector<Frame>& frames() const noexcept { return frames_; }

 private:
  std::vector<Frame> frames_;
  int cond_index_;
};

}  // namespace vcd
