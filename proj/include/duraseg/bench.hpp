#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace duraseg {

struct BenchRow {
  std::size_t frames = 0;
  std::size_t segments = 0;
  double decoder_seconds = 0.0;
  double hsmm_seconds = 0.0;
};

struct BenchOptions {
  std::size_t repeats = 3;  // best-of
  std::uint64_t seed = 1;
  double hop_seconds = 0.01;
  bool run_hsmm = true;
};

/// Wall time of decode_onsets and of hsmm_forced_align on matched random
/// problems (T frames, N segments / states). The HSMM gets occupancy support
/// over the full range 1..T so both decoders search the same duration space.
std::vector<BenchRow> run_benchmark(std::span<const std::size_t> frames,
                                    std::span<const std::size_t> segments, const BenchOptions& options = {});

std::string bench_to_csv(std::span<const BenchRow> rows);

/// Least-squares slope of log(decoder seconds) against log(T).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace duraseg
