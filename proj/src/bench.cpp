#include "duraseg/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "duraseg/decoder.hpp"
#include "duraseg/error.hpp"
#include "duraseg/hsmm.hpp"
#include "duraseg/io.hpp"
#include "duraseg/synth.hpp"

namespace duraseg {

namespace {

template <typename F>
double best_of(std::size_t repeats, F&& run) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
    const auto start = std::chrono::steady_clock::now();
    run();
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    best = std::min(best, elapsed.count());
  }
  return best;
}

// Keeps the optimizer from discarding a result.
volatile double g_sink = 0.0;

}  // namespace

std::vector<BenchRow> run_benchmark(std::span<const std::size_t> frames,
                                    std::span<const std::size_t> segments, const BenchOptions& options) {
  std::vector<BenchRow> rows;
  for (std::size_t n_frames : frames) {
    for (std::size_t n_segments : segments) {
      if (n_segments == 0 || n_frames < n_segments + 1)
        throw Error(ErrorCode::kBadInput, "benchmark needs T >= N + 1 and N >= 1");
      Rng rng(derive_seed(options.seed, n_frames * 1000003 + n_segments));
      std::vector<double> values(n_frames);
      for (double& v : values) v = rng.uniform();
      const OnsetCurve odf(std::move(values), options.hop_seconds);
      const double span = static_cast<double>(n_frames - 1) * options.hop_seconds;
      const std::vector<double> durations(n_segments, span / static_cast<double>(n_segments));

      BenchRow row{n_frames, n_segments, 0.0, 0.0};
      row.decoder_seconds = best_of(options.repeats, [&] { g_sink = decode_onsets(odf, durations).score; });

      if (options.run_hsmm) {
        std::vector<double> log_probs(n_frames * n_segments);
        for (double& v : log_probs) v = -std::abs(rng.normal());
        const EmissionMatrix emissions(std::move(log_probs), n_frames,
                                       std::vector<std::string>(n_segments, "x"), options.hop_seconds);
        std::vector<OccupancyDistribution> occupancies;
        for (double mu : durations)
          occupancies.push_back(discretize_occupancy(mu, kDefaultGamma, emissions.grid(), n_frames));
        row.hsmm_seconds =
            best_of(options.repeats, [&] { g_sink = hsmm_forced_align(emissions, occupancies).score; });
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string bench_to_csv(std::span<const BenchRow> rows) {
  std::string out = "T,N,decoder_seconds,hsmm_seconds,hsmm_over_decoder\n";
  for (const auto& row : rows) {
    const double ratio = row.decoder_seconds > 0.0 ? row.hsmm_seconds / row.decoder_seconds : 0.0;
    out += std::to_string(row.frames) + ',' + std::to_string(row.segments) + ',' +
           io::format_double(row.decoder_seconds) + ',' + io::format_double(row.hsmm_seconds) + ',' +
           io::format_double(ratio) + '\n';
  }
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::kBadInput, "slope needs two or more points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace duraseg
