#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vcd/spectra.hpp"

namespace vcd {

struct SwdConfig {
  int num_projections = 64;
  std::uint64_t seed = 0;
  int order = 2;  // 1 or 2
};

/// Closed-form 1D Wasserstein-p distance between equal-size empirical
/// measures: ((1/n) sum_k |a_(k) - b_(k)|^p)^(1/p) over sorted samples.
double exact_w1d(std::span<const double> a, std::span<const double> b, int p);

/// `count` unit vectors in R^dim, normalized standard-normal draws from
/// Rng(seed). Row-major count x dim.
std::vector<double> sample_directions(int dim, int count, std::uint64_t seed);

/// A cloud projected onto every direction of `cfg`, each projection sorted
/// (row-major projections x count). A 1-d cloud keeps a single row holding
/// its sorted samples. Lets one side of many comparisons be sorted once.
struct SortedProjections {
  CloudKind kind = CloudKind::amplitude;
  int dim = 0;
  std::size_t count = 0;
  SwdConfig cfg;
  std::vector<double> values;
};

SortedProjections project_sorted(const PointCloud& cloud, const SwdConfig& cfg);

/// Sliced Wasserstein-p distance. For 1-d clouds this is exact_w1d.
/// Throws ShapeError on dimension, count or kind mismatch.
double sliced_wd(const PointCloud& a, const PointCloud& b, const SwdConfig& cfg);
/// Same value from pre-sorted projections; ConfigError if they were built
/// with different configurations.
double sliced_wd(const SortedProjections& a, const SortedProjections& b);

}  // namespace vcd
