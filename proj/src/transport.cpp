#include "vcd/transport.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "vcd/error.hpp"
#include "vcd/rng.hpp"

namespace vcd {

namespace {

void check_order(int p) {
  if (p != 1 && p != 2) throw ConfigError("Wasserstein order must be 1 or 2, got " + std::to_string(p));
}

// (1/n) sum |a_k - b_k|^p over already-sorted inputs.
double sorted_cost(std::span<const double> a, std::span<const double> b, int p) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = std::abs(a[k] - b[k]);
    acc += p == 1 ? d : d * d;
  }
  return acc / static_cast<double>(a.size());
}

// Order-preserving map from finite doubles to unsigned keys.
std::uint64_t sort_key(double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  return bits & (std::uint64_t{1} << 63) ? ~bits : bits | (std::uint64_t{1} << 63);
}

double from_key(std::uint64_t key) {
  return std::bit_cast<double>(key & (std::uint64_t{1} << 63) ? key & ~(std::uint64_t{1} << 63) : ~key);
}

// LSD radix sort, 11-bit digits; passes where every key shares the digit are skipped.
void sort_values(std::vector<double>& v, std::vector<std::uint64_t>& keys, std::vector<std::uint64_t>& tmp) {
  if (v.size() < 256) {
    std::sort(v.begin(), v.end());
    return;
  }
  constexpr int kBits = 11;
  constexpr std::size_t kBuckets = std::size_t{1} << kBits;
  keys.resize(v.size());
  tmp.resize(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) keys[k] = sort_key(v[k]);
  std::array<std::size_t, kBuckets> count;
  for (int shift = 0; shift < 64; shift += kBits) {
    count.fill(0);
    for (auto key : keys) ++count[(key >> shift) & (kBuckets - 1)];
    if (count[(keys[0] >> shift) & (kBuckets - 1)] == keys.size()) continue;
    std::size_t offset = 0;
    for (auto& c : count) offset += std::exchange(c, offset);
    for (auto key : keys) tmp[count[(key >> shift) & (kBuckets - 1)]++] = key;
    keys.swap(tmp);
  }
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = from_key(keys[k]);
}

double root(double cost, int p) { return p == 1 ? cost : std::sqrt(cost); }

}  // namespace

double exact_w1d(std::span<const double> a, std::span<const double> b, int p) {
  check_order(p);
  if (a.size() != b.size()) {
    throw SampleCountError("exact_w1d needs equal sample counts, got " + std::to_string(a.size()) + " and " +
                           std::to_string(b.size()));
  }
  if (a.empty()) throw SampleCountError("exact_w1d needs at least one sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  for (std::size_t k = 0; k < sa.size(); ++k) {
    if (!std::isfinite(sa[k]) || !std::isfinite(sb[k])) throw ValueError("exact_w1d: non-finite sample");
  }
  std::vector<std::uint64_t> keys, tmp;
  sort_values(sa, keys, tmp);
  sort_values(sb, keys, tmp);
  return root(sorted_cost(sa, sb, p), p);
}

std::vector<double> sample_directions(int dim, int count, std::uint64_t seed) {
  if (dim < 1 || count < 1) throw ConfigError("directions need dim >= 1 and count >= 1");
  Rng rng(seed);
  std::vector<double> dirs(static_cast<std::size_t>(dim) * count);
  for (int l = 0; l < count; ++l) {
    double* d = dirs.data() + static_cast<std::size_t>(l) * dim;
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int j = 0; j < dim; ++j) {
        d[j] = rng.normal();
        norm2 += d[j] * d[j];
      }
    } while (norm2 < 1e-300);
    const double inv = 1.0 / std::sqrt(norm2);
    for (int j = 0; j < dim; ++j) d[j] *= inv;
  }
  return dirs;
}

SortedProjections project_sorted(const PointCloud& cloud, const SwdConfig& cfg) {
  check_order(cfg.order);
  if (cfg.num_projections < 1) throw ConfigError("num_projections must be >= 1");
  if (cloud.count() == 0) throw ShapeError("empty point cloud");
  SortedProjections out{cloud.kind, cloud.dim, cloud.count(), cfg, {}};
  std::vector<std::uint64_t> keys, tmp;
  if (cloud.dim == 1) {
    for (double v : cloud.points) {
      if (!std::isfinite(v)) throw ValueError("exact_w1d: non-finite sample");
    }
    out.values = cloud.points;
    sort_values(out.values, keys, tmp);
    return out;
  }
  const auto n = cloud.count();
  const auto d = static_cast<std::size_t>(cloud.dim);
  const auto dirs = sample_directions(cloud.dim, cfg.num_projections, cfg.seed);
  out.values.resize(n * static_cast<std::size_t>(cfg.num_projections));
  std::vector<double> row(n);
  for (int l = 0; l < cfg.num_projections; ++l) {
    const double* dir = dirs.data() + static_cast<std::size_t>(l) * d;
    for (std::size_t k = 0; k < n; ++k) {
      const double* x = cloud.point(k);
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += x[j] * dir[j];
      row[k] = s;
    }
    sort_values(row, keys, tmp);
    std::copy(row.begin(), row.end(), out.values.begin() + static_cast<std::ptrdiff_t>(l * n));
  }
  return out;
}

double sliced_wd(const SortedProjections& a, const SortedProjections& b) {
  if (a.dim != b.dim) {
    throw ShapeError("point cloud dimensions differ: " + std::to_string(a.dim) + " vs " + std::to_string(b.dim));
  }
  if (a.count != b.count) {
    throw ShapeError("point cloud sizes differ: " + std::to_string(a.count) + " vs " + std::to_string(b.count));
  }
  if (a.kind != b.kind) throw ShapeError("point cloud kinds differ");
  const int p = a.cfg.order;
  if (a.dim == 1) {
    if (p != b.cfg.order) throw ConfigError("projections built with different configurations");
    return root(sorted_cost(a.values, b.values, p), p);
  }
  if (a.cfg.num_projections != b.cfg.num_projections || a.cfg.seed != b.cfg.seed || p != b.cfg.order) {
    throw ConfigError("projections built with different configurations");
  }
  double total = 0.0;
  for (int l = 0; l < a.cfg.num_projections; ++l) {
    const auto offset = static_cast<std::size_t>(l) * a.count;
    total += sorted_cost(std::span(a.values).subspan(offset, a.count), std::span(b.values).subspan(offset, a.count), p);
  }
  return root(total / a.cfg.num_projections, p);
}

double sliced_wd(const PointCloud& a, const PointCloud& b, const SwdConfig& cfg) {
  check_order(cfg.order);
  if (cfg.num_projections < 1) throw ConfigError("num_projections must be >= 1");
  if (a.dim != b.dim) {
    throw ShapeError("point cloud dimensions differ: " + std::to_string(a.dim) + " vs " + std::to_string(b.dim));
  }
  if (a.count() != b.count()) {
    throw ShapeError("point cloud sizes differ: " + std::to_string(a.count()) + " vs " +
                     std::to_string(b.count()));
  }
  if (a.kind != b.kind) throw ShapeError("point cloud kinds differ");
  return sliced_wd(project_sorted(a, cfg), project_sorted(b, cfg));
}

}  // namespace vcd
