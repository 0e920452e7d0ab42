#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "vcd/frame.hpp"

namespace vcd {

/// Loads a binary PPM (P6), PGM (P5) or VCDF file. 8-bit samples map to
/// v/255 (16-bit netpbm samples to v/65535); VCDF float32 samples are taken
/// as-is and must be finite and within [0,1].
Frame load_frame(const std::filesystem::path& path,
                 std::optional<int> expected_channels = std::nullopt);

/// Loads frames in manifest order. Requires at least two paths and equal
/// frame shapes.
Video load_video(const std::vector<std::filesystem::path>& manifest,
                 int cond_index = 1);

/// Expands a `--video` argument: a directory yields its .ppm/.pgm/.vcdf
/// files sorted by name; any other file is read as a text manifest with
/// one path per line (relative paths resolve against the manifest's
/// directory, blank lines and '#' comments are skipped).
std::vector<std::filesystem::path> resolve_manifest(const std::filesystem::path& source);

/// Writes the raw little-endian float32 format. Exact for any frame whose
/// samples are float-representable.
void save_vcdf(const std::filesystem::path& path, const Frame& frame);

/// Writes 8-bit binary netpbm (P6 for 3 channels, P5 for 1). Samples are
/// rounded to the nearest of 256 levels.
void save_netpbm(const std::filesystem::path& path, const Frame& frame);

/// Bilinear resampling with half-pixel centres and edge clamping.
Frame resize_bilinear(const Frame& frame, int height, int width);

}  // namespace vcd
