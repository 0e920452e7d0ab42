#include "vcd/media_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "vcd/error.hpp"

namespace vcd {

namespace fs = std::filesystem;

Frame::Frame(int height, int width, int channels, std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  if (height <= 0 || width <= 0) throw ValueError("frame dimensions must be positive");
  if (channels != 1 && channels != 3) throw ValueError("frame channels must be 1 or 3");
  const auto expected = static_cast<std::size_t>(height) * width * channels;
  if (data_.size() != expected) {
    throw ValueError("frame data length " + std::to_string(data_.size()) + " != H*W*C = " +
                     std::to_string(expected));
  }
  for (double v : data_) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ValueError("frame sample outside [0,1] or non-finite");
    }
  }
}

Frame::Frame(int height, int width, int channels, double fill)
    : Frame(height, width, channels,
            std::vector<double>(static_cast<std::size_t>(std::max(height, 0)) *
                                    static_cast<std::size_t>(std::max(width, 0)) *
                                    static_cast<std::size_t>(std::max(channels, 0)),
                                fill)) {}

Video::Video(std::vector<Frame> frames, int cond_index)
    : frames_(std::move(frames)), cond_index_(cond_index) {
  if (frames_.size() < 2) {
    throw ArityError("video needs at least 2 frames (N >= 2), got " +
                     std::to_string(frames_.size()));
  }
  for (const Frame& f : frames_) {
    if (!f.same_shape(frames_.front())) {
      throw DimensionMismatchError("video frames differ in size: " +
                                   std::to_string(frames_.front().height()) + "x" +
                                   std::to_string(frames_.front().width()) + "x" +
                                   std::to_string(frames_.front().channels()) + " vs " +
                                   std::to_string(f.height()) + "x" + std::to_string(f.width()) +
                                   "x" + std::to_string(f.channels()));
    }
  }
  if (cond_index_ < 1 || cond_index_ > frame_count()) {
    throw DomainError("cond_index " + std::to_string(cond_index_) + " outside [1, " +
                      std::to_string(frame_count()) + "]");
  }
}

namespace {

std::vector<unsigned char> read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class ByteReader {
 public:
  ByteReader(const std::vector<unsigned char>& bytes, const fs::path& path)
      : bytes_(bytes), path_(path) {}

  std::uint32_t u32le() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(bytes_[pos_ + k]) << (8 * k);
    pos_ += 4;
    return v;
  }
  float f32le() { return std::bit_cast<float>(u32le()); }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  void need(std::size_t n) const {
    if (remaining() < n) throw CorruptFileError("truncated file: " + path_.string());
  }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }

 private:
  const std::vector<unsigned char>& bytes_;
  const fs::path& path_;
  std::size_t pos_ = 0;
};

// Reads an ASCII header integer, skipping whitespace and '#' comments.
unsigned long netpbm_header_int(const std::vector<unsigned char>& bytes, std::size_t& pos,
                                const fs::path& path) {
  for (;;) {
    if (pos >= bytes.size()) throw CorruptFileError("truncated netpbm header: " + path.string());
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(bytes[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  if (!std::isdigit(bytes[pos])) throw CorruptFileError("bad netpbm header: " + path.string());
  unsigned long value = 0;
  while (pos < bytes.size() && std::isdigit(bytes[pos])) {
    value = value * 10 + (bytes[pos] - '0');
    if (value > (1ul << 30)) throw CorruptFileError("netpbm dimension too large: " + path.string());
    ++pos;
  }
  return value;
}

Frame parse_netpbm(const std::vector<unsigned char>& bytes, int channels, const fs::path& path) {
  std::size_t pos = 2;
  const auto width = netpbm_header_int(bytes, pos, path);
  const auto height = netpbm_header_int(bytes, pos, path);
  const auto maxval = netpbm_header_int(bytes, pos, path);
  if (width == 0 || height == 0 || maxval == 0 || maxval > 65535) {
    throw CorruptFileError("bad netpbm header values: " + path.string());
  }
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw CorruptFileError("truncated netpbm header: " + path.string());
  }
  ++pos;
  const std::size_t samples = static_cast<std::size_t>(width) * height * channels;
  const std::size_t bytes_per = maxval < 256 ? 1 : 2;
  if (bytes.size() - pos < samples * bytes_per) {
    throw CorruptFileError("truncated netpbm raster: " + path.string());
  }
  std::vector<double> data(samples);
  const double scale = static_cast<double>(maxval);
  for (std::size_t k = 0; k < samples; ++k) {
    unsigned v = bytes_per == 1 ? bytes[pos + k]
                                : (static_cast<unsigned>(bytes[pos + 2 * k]) << 8) | bytes[pos + 2 * k + 1];
    if (v > maxval) throw ValueError("netpbm sample exceeds maxval: " + path.string());
    data[k] = v / scale;
  }
  return Frame(static_cast<int>(height), static_cast<int>(width), channels, std::move(data));
}

Frame parse_vcdf(const std::vector<unsigned char>& bytes, const fs::path& path) {
  ByteReader r(bytes, path);
  r.skip(4);
  const auto version = r.u32le();
  if (version != 1) throw FormatError("unsupported VCDF version " + std::to_string(version));
  const auto h = r.u32le();
  const auto w = r.u32le();
  const auto c = r.u32le();
  if (h == 0 || w == 0 || (c != 1 && c != 3) || h > (1u << 20) || w > (1u << 20)) {
    throw CorruptFileError("bad VCDF header dimensions in " + path.string());
  }
  const std::size_t samples = static_cast<std::size_t>(h) * w * c;
  r.need(samples * 4);
  std::vector<double> data(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const float v = r.f32le();
    if (!std::isfinite(v)) throw ValueError("non-finite sample in " + path.string());
    data[k] = v;
  }
  return Frame(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c), std::move(data));
}

void write_u32le(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int k = 0; k < 4; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xff);
  out.write(b.data(), 4);
}

bool is_frame_file(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return ext == ".ppm" || ext == ".pgm" || ext == ".vcdf";
}

}  // namespace

Frame load_frame(const fs::path& path, std::optional<int> expected_channels) {
  const auto bytes = read_all(path);
  Frame frame;
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), "VCDF", 4) == 0) {
    frame = parse_vcdf(bytes, path);
  } else if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
    frame = parse_netpbm(bytes, 3, path);
  } else if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
    frame = parse_netpbm(bytes, 1, path);
  } else {
    throw FormatError("unrecognised image format (magic bytes) in " + path.string());
  }
  if (expected_channels && frame.channels() != *expected_channels) {
    throw ShapeError(path.string() + " has " + std::to_string(frame.channels()) +
                     " channels, expected " + std::to_string(*expected_channels));
  }
  return frame;
}

Video load_video(const std::vector<fs::path>& manifest, int cond_index) {
  if (manifest.size() < 2) {
    throw ArityError("video needs at least 2 frames (N >= 2), got " +
                     std::to_string(manifest.size()));
  }
  std::vector<Frame> frames;
  frames.reserve(manifest.size());
  for (const auto& p : manifest) frames.push_back(load_frame(p));
  return Video(std::move(frames), cond_index);
}

std::vector<fs::path> resolve_manifest(const fs::path& source) {
  std::vector<fs::path> paths;
  if (fs::is_directory(source)) {
    for (const auto& entry : fs::directory_iterator(source)) {
      if (entry.is_regular_file() && is_frame_file(entry.path())) paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    return paths;
  }
  std::ifstream in(source);
  if (!in) throw IoError("cannot open video source " + source.string());
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    fs::path p = line.substr(first, last - first + 1);
    if (p.is_relative()) p = source.parent_path() / p;
    paths.push_back(p);
  }
  return paths;
}

void save_vcdf(const fs::path& path, const Frame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write("VCDF", 4);
  write_u32le(out, 1);
  write_u32le(out, static_cast<std::uint32_t>(frame.height()));
  write_u32le(out, static_cast<std::uint32_t>(frame.width()));
  write_u32le(out, static_cast<std::uint32_t>(frame.channels()));
  for (double v : frame.data()) write_u32le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  if (!out) throw IoError("write failed: " + path.string());
}

void save_netpbm(const fs::path& path, const Frame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << (frame.channels() == 3 ? "P6" : "P5") << '\n'
      << frame.width() << ' ' << frame.height() << "\n255\n";
  std::vector<char> raster(frame.size());
  std::transform(frame.data().begin(), frame.data().end(), raster.begin(), [](double v) {
    return static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
  });
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

Frame resize_bilinear(const Frame& frame, int height, int width) {
  if (height <= 0 || width <= 0) throw ValueError("resize target must be positive");
  if (height == frame.height() && width == frame.width()) return frame;
  const int c = frame.channels();
  std::vector<double> out(static_cast<std::size_t>(height) * width * c);
  const double sy = static_cast<double>(frame.height()) / height;
  const double sx = static_cast<double>(frame.width()) / width;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, frame.height() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, frame.height() - 1);
    const double ty = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, frame.width() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, frame.width() - 1);
      const double tx = fx - x0;
      for (int ch = 0; ch < c; ++ch) {
        const double top = frame.at(y0, x0, ch) * (1 - tx) + frame.at(y0, x1, ch) * tx;
        const double bot = frame.at(y1, x0, ch) * (1 - tx) + frame.at(y1, x1, ch) * tx;
        out[(static_cast<std::size_t>(y) * width + x) * c + ch] =
            std::clamp(top * (1 - ty) + bot * ty, 0.0, 1.0);
      }
    }
  }
  return Frame(height, width, c, std::move(out));
}

}  // namespace vcd
