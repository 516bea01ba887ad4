#pragma once

#include <span>
#include <vector>

namespace persistid {

/// One part of a split transfer, downloaded at its own rate.
struct Chunk {
  double volume = 0;     // bytes
  double bandwidth = 0;  // bytes per second
};

/// Non-empty list of chunks with positive volumes and bandwidths.
struct ChunkPlan {
  std::vector<Chunk> chunks;

  /// Every part at the same rate.
  static ChunkPlan uniform(std::span<const double> volumes, double bandwidth);
  /// `total` bytes split into `parts` equal chunks at the same rate.
  static ChunkPlan even_split(double total, std::size_t parts, double bandwidth);
};

/// All times in seconds.
struct TransferEstimate {
  double resolution_time = 0;
  double bootstrap_time = 0;
  double duration = 0;
};

/// Multi-source access: resolution + bootstrap + the slowest chunk.
/// Throws Errc::EmptyPlan, NonPositiveChunk or InvalidArgument.
TransferEstimate estimate_parallel(double resolution_time, double bootstrap_time, const ChunkPlan& plan);

/// Single-source access: resolution + every chunk in sequence.
TransferEstimate estimate_serial(double resolution_time, const ChunkPlan& plan);

/// Serial minus parallel duration. Positive when the parallel route wins.
double compare(double resolution_time, double bootstrap_time, const ChunkPlan& plan);

/// Bootstrap time at which both routes take equally long.
double break_even_bootstrap(const ChunkPlan& plan);

}  // namespace persistid
