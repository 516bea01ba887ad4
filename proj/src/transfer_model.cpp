#include "persistid/transfer_model.hpp"

#include <algorithm>
#include <cmath>

#include "persistid/error.hpp"

namespace persistid {

namespace {

void check_plan(const ChunkPlan& plan) {
  if (plan.chunks.empty()) throw Error(Errc::EmptyPlan, "chunk plan has no chunks");
  for (const auto& c : plan.chunks) {
    if (!(c.volume > 0) || !(c.bandwidth > 0) || !std::isfinite(c.volume) || !std::isfinite(c.bandwidth)) {
      throw Error(Errc::NonPositiveChunk, "chunk volume and bandwidth must be positive and finite");
    }
  }
}

void check_time(double t, const char* what) {
  if (!(t >= 0) || !std::isfinite(t)) throw Error(Errc::InvalidArgument, std::string(what) + " must be >= 0");
}

double slowest_chunk(const ChunkPlan& plan) {
  double slowest = 0;
  for (const auto& c : plan.chunks) slowest = std::max(slowest, c.volume / c.bandwidth);
  return slowest;
}

double all_chunks(const ChunkPlan& plan) {
  double total = 0;
  for (const auto& c : plan.chunks) total += c.volume / c.bandwidth;
  return total;
}

}  // namespace

ChunkPlan ChunkPlan::uniform(std::span<const double> volumes, double bandwidth) {
  ChunkPlan plan;
  for (double v : volumes) plan.chunks.push_back({v, bandwidth});
  return plan;
}

ChunkPlan ChunkPlan::even_split(double total, std::size_t parts, double bandwidth) {
  ChunkPlan plan;
  for (std::size_t i = 0; i < parts; ++i) plan.chunks.push_back({total / static_cast<double>(parts), bandwidth});
  return plan;
}

TransferEstimate estimate_parallel(double resolution_time, double bootstrap_time, const ChunkPlan& plan) {
  check_time(resolution_time, "resolution time");
  check_time(bootstrap_time, "bootstrap time");
  check_plan(plan);
  return {resolution_time, bootstrap_time, resolution_time + slowest_chunk(plan) + bootstrap_time};
}

TransferEstimate estimate_serial(double resolution_time, const ChunkPlan& plan) {
  check_time(resolution_time, "resolution time");
  check_plan(plan);
  return {resolution_time, 0.0, resolution_time + all_chunks(plan)};
}

double compare(double resolution_time, double bootstrap_time, const ChunkPlan& plan) {
  check_time(resolution_time, "resolution time");
  check_time(bootstrap_time, "bootstrap time");
  check_plan(plan);
  // t_r cancels; computing the difference directly avoids rounding it in.
  return all_chunks(plan) - slowest_chunk(plan) - bootstrap_time;
}

double break_even_bootstrap(const ChunkPlan& plan) {
  check_plan(plan);
  return all_chunks(plan) - slowest_chunk(plan);
}

}  // namespace persistid
