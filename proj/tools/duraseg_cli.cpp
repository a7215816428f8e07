// duraseg command-line tool. Everything goes through the C API.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "duraseg/duraseg.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;

struct GlobalFlags {
  double gamma = 0.35;
  double epsilon = 1e-10;
  double tol_ms = 25.0;
  double hop_ms = 10.0;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;

  ds_params params() const {
    ds_params p;
    ds_params_default(&p);
    p.gamma = gamma;
    p.epsilon = epsilon;
    p.tol_seconds = tol_ms / 1000.0;
    p.hop_seconds = hop_ms / 1000.0;
    return p;
  }
};

// Owning wrappers for C handles.
struct AnnotationDeleter { void operator()(ds_annotation* p) const { ds_annotation_free(p); } };
struct OdfDeleter { void operator()(ds_odf* p) const { ds_odf_free(p); } };
struct EmissionsDeleter { void operator()(ds_emissions* p) const { ds_emissions_free(p); } };
struct TargetsDeleter { void operator()(ds_targets* p) const { ds_targets_free(p); } };
struct EvaluatorDeleter { void operator()(ds_evaluator* p) const { ds_evaluator_free(p); } };
struct SimConfigDeleter { void operator()(ds_sim_config* p) const { ds_sim_config_free(p); } };
struct StringDeleter { void operator()(char* p) const { ds_string_free(p); } };

using Annotation = std::unique_ptr<ds_annotation, AnnotationDeleter>;
using Odf = std::unique_ptr<ds_odf, OdfDeleter>;
using Emissions = std::unique_ptr<ds_emissions, EmissionsDeleter>;
using Targets = std::unique_ptr<ds_targets, TargetsDeleter>;
using Evaluator = std::unique_ptr<ds_evaluator, EvaluatorDeleter>;
using SimConfig = std::unique_ptr<ds_sim_config, SimConfigDeleter>;
using CString = std::unique_ptr<char, StringDeleter>;

std::mutex g_log_mutex;

// Raised by the command bodies; carries the exit code.
struct Failure {
  int exit_code;
};

int exit_code_for(ds_status status) {
  if (status == DS_OK) return kExitOk;
  return ds_status_is_infeasible(status) ? kExitInfeasible : kExitInput;
}

void report(const std::string& context, ds_status status) {
  std::lock_guard lock(g_log_mutex);
  std::cerr << "duraseg: " << context << ": " << ds_status_name(status) << ": " << ds_last_error() << "\n";
}

void check(ds_status status, const std::string& context) {
  if (status == DS_OK) return;
  report(context, status);
  throw Failure{exit_code_for(status)};
}

[[noreturn]] void usage_error(const std::string& message) {
  std::cerr << "duraseg: " << message << "\n";
  throw Failure{kExitInput};
}

Annotation load_annotation(const fs::path& path) {
  ds_annotation* raw = nullptr;
  check(ds_annotation_load(path.c_str(), &raw), path.string());
  return Annotation(raw);
}

std::vector<std::string> stems_in(const fs::path& dir, const std::string& extension) {
  std::vector<std::string> stems;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == extension) stems.push_back(entry.path().stem());
  }
  if (ec) usage_error("cannot list '" + dir.string() + "': " + ec.message());
  std::sort(stems.begin(), stems.end());
  return stems;
}

// Runs job(i) for i in [0, n) on `jobs` threads and returns the worst exit
// code: input errors outrank infeasibility.
template <typename Job>
int run_parallel(std::size_t n, unsigned jobs, Job&& job) {
  std::atomic<std::size_t> next{0};
  std::atomic<int> worst{kExitOk};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      int code = kExitOk;
      try {
        job(i);
      } catch (const Failure& f) {
        code = f.exit_code;
      }
      if (code == kExitInput) {
        worst = kExitInput;
      } else if (code == kExitInfeasible) {
        int expected = kExitOk;
        worst.compare_exchange_strong(expected, kExitInfeasible);
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return worst;
}

void segment_one(const fs::path& odf_path, const fs::path& teacher_path, const fs::path& out_path,
                 const ds_params& params) {
  ds_odf* odf_raw = nullptr;
  check(ds_odf_load(odf_path.c_str(), &odf_raw), odf_path.string());
  const Odf odf(odf_raw);
  const Annotation teacher = load_annotation(teacher_path);
  ds_annotation* result = nullptr;
  std::size_t failed = 0;
  const ds_status status = ds_segment(odf.get(), teacher.get(), &params, &result, &failed);
  if (status == DS_ERR_INFEASIBLE_SYLLABLE) {
    report(odf_path.string() + " (syllable " + std::to_string(failed) + ")", status);
    throw Failure{kExitInfeasible};
  }
  check(status, odf_path.string());
  const Annotation out(result);
  check(ds_annotation_save(out.get(), out_path.c_str()), out_path.string());
}

void align_one(const fs::path& emissions_path, const fs::path& teacher_path, const fs::path& out_path,
               const ds_params& params, double phrase_start) {
  ds_emissions* em_raw = nullptr;
  check(ds_emissions_load(emissions_path.c_str(), params.hop_seconds, &em_raw), emissions_path.string());
  const Emissions emissions(em_raw);
  const Annotation teacher = load_annotation(teacher_path);
  ds_annotation* result = nullptr;
  check(ds_align(emissions.get(), teacher.get(), &params, phrase_start, &result), emissions_path.string());
  const Annotation out(result);
  check(ds_annotation_save(out.get(), out_path.c_str()), out_path.string());
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) usage_error("cannot write '" + path.string() + "'");
  out << text;
}

std::vector<std::size_t> parse_list(const std::string& text, const char* flag) {
  std::vector<std::size_t> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(item, &used);
      if (used != item.size() || v == 0) throw std::invalid_argument(item);
      values.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      usage_error(std::string(flag) + " expects a comma-separated list of positive integers");
    }
  }
  if (values.empty()) usage_error(std::string(flag) + " is empty");
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Duration-informed syllable and phoneme segmentation of singing phrases"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--gamma", g.gamma, "Prior standard deviation as a fraction of the mean duration")
      ->capture_default_str();
  app.add_option("--epsilon", g.epsilon, "Floor applied to onset function values before the log")
      ->capture_default_str();
  app.add_option("--tol-ms", g.tol_ms, "Onset match tolerance in milliseconds")->capture_default_str();
  app.add_option("--hop-ms", g.hop_ms, "Frame hop in milliseconds")->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed (overrides the simulation config)");
  app.add_option("--jobs", g.jobs, "Phrases processed in parallel")->capture_default_str();

  std::string odf_arg, teacher_arg, out_arg;
  auto* segment = app.add_subcommand("segment", "Hierarchical onset decoding from ODFs and a teacher annotation");
  segment->add_option("--odf", odf_arg, "ODF JSON file or directory")->required();
  segment->add_option("--teacher", teacher_arg, "Teacher annotation JSON file or directory")->required();
  segment->add_option("--out", out_arg, "Output annotation JSON file or directory")->required();

  std::string emissions_arg;
  double phrase_start = 0.0;
  auto* align = app.add_subcommand("align", "HSMM forced-alignment baseline");
  align->add_option("--emissions", emissions_arg, "Emission CSV file or directory")->required();
  align->add_option("--teacher", teacher_arg, "Teacher annotation JSON file or directory")->required();
  align->add_option("--out", out_arg, "Output annotation JSON file or directory")->required();
  align->add_option("--phrase-start", phrase_start, "Time of the first emission frame (seconds)");

  std::string ref_arg, det_arg, level_arg = "both";
  auto* eval = app.add_subcommand("eval", "Onset P/R/F1 and segmentation accuracy");
  eval->add_option("--ref", ref_arg, "Reference annotation directory or file")->required();
  eval->add_option("--det", det_arg, "Detected annotation directory or file")->required();
  eval->add_option("--level", level_arg, "syllable, phoneme or both")
      ->check(CLI::IsMember({"syllable", "phoneme", "both"}))
      ->capture_default_str();
  eval->add_option("--out", out_arg, "Report JSON")->required();

  std::string annotation_arg;
  std::size_t n_frames = 0;
  auto* targets = app.add_subcommand("targets", "Per-frame onset training targets and weights");
  targets->add_option("--annotation", annotation_arg, "Annotation JSON")->required();
  targets->add_option("--out", out_arg, "Targets CSV")->required();
  targets->add_option("--frames", n_frames, "Grid length (default: up to the phrase end)");

  std::string config_arg;
  auto* simulate = app.add_subcommand("simulate", "Write a synthetic teacher/student data set");
  simulate->add_option("--config", config_arg, "Simulation config JSON (omit for defaults)");
  simulate->add_option("--out", out_arg, "Output directory")->required();

  std::string t_list, n_list;
  std::size_t repeats = 3;
  auto* bench = app.add_subcommand("bench", "Runtime of both decoders over problem sizes");
  bench->add_option("--t", t_list, "Comma-separated frame counts")->required();
  bench->add_option("--n", n_list, "Comma-separated segment counts")->required();
  bench->add_option("--repeats", repeats, "Runs per size, best time kept")->capture_default_str();
  bench->add_option("--out", out_arg, "Output CSV")->required();

  std::string result_arg;
  auto* plot = app.add_subcommand("plot-data", "CSV of ODF curves with decoded onset markers");
  plot->add_option("--odf", odf_arg, "ODF JSON")->required();
  plot->add_option("--result", result_arg, "Decoded annotation JSON")->required();
  plot->add_option("--out", out_arg, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    const ds_params params = g.params();

    if (*segment || *align) {
      const bool is_segment = static_cast<bool>(*segment);
      const fs::path input = is_segment ? odf_arg : emissions_arg;
      const std::string ext = is_segment ? ".json" : ".csv";
      auto run_one = [&](const fs::path& in, const fs::path& teacher, const fs::path& out) {
        if (is_segment) {
          segment_one(in, teacher, out, params);
        } else {
          align_one(in, teacher, out, params, phrase_start);
        }
      };
      if (!fs::is_directory(input)) {
        run_one(input, teacher_arg, out_arg);
        return kExitOk;
      }
      if (!fs::is_directory(teacher_arg)) usage_error("--teacher must be a directory when the input is");
      std::error_code ec;
      fs::create_directories(out_arg, ec);
      if (ec) usage_error("cannot create '" + out_arg + "': " + ec.message());
      const auto stems = stems_in(input, ext);
      return run_parallel(stems.size(), g.jobs, [&](std::size_t i) {
        run_one(input / (stems[i] + ext), fs::path(teacher_arg) / (stems[i] + ".json"),
                fs::path(out_arg) / (stems[i] + ".json"));
      });
    }

    if (*eval) {
      std::vector<std::pair<fs::path, fs::path>> pairs;
      if (fs::is_directory(ref_arg)) {
        if (!fs::is_directory(det_arg)) usage_error("--det must be a directory when --ref is");
        for (const auto& stem : stems_in(ref_arg, ".json"))
          pairs.emplace_back(fs::path(ref_arg) / (stem + ".json"), fs::path(det_arg) / (stem + ".json"));
      } else {
        pairs.emplace_back(ref_arg, det_arg);
      }
      if (pairs.empty()) usage_error("no reference annotations in '" + ref_arg + "'");
      ds_evaluator* ev_raw = nullptr;
      check(ds_evaluator_create(params.tol_seconds, &ev_raw), "evaluator");
      const Evaluator evaluator(ev_raw);
      for (const auto& [ref_path, det_path] : pairs) {
        if (!fs::exists(det_path)) usage_error("missing detection '" + det_path.string() + "'");
        const Annotation ref = load_annotation(ref_path);
        const Annotation det = load_annotation(det_path);
        check(ds_evaluator_add(evaluator.get(), ref.get(), det.get()), ref_path.string());
      }
      const unsigned levels = level_arg == "syllable" ? 1u : level_arg == "phoneme" ? 2u : 3u;
      char* json = nullptr;
      check(ds_evaluator_report_json(evaluator.get(), levels, &json), "report");
      const CString text(json);
      write_file(out_arg, text.get());
      return kExitOk;
    }

    if (*targets) {
      const Annotation annotation = load_annotation(annotation_arg);
      ds_targets* raw = nullptr;
      check(ds_targets_create(annotation.get(), params.hop_seconds, n_frames, &raw), annotation_arg);
      const Targets t(raw);
      check(ds_targets_save_csv(t.get(), out_arg.c_str()), out_arg);
      return kExitOk;
    }

    if (*simulate) {
      ds_sim_config* raw = nullptr;
      if (config_arg.empty()) {
        check(ds_sim_config_default(&raw), "defaults");
      } else {
        check(ds_sim_config_load(config_arg.c_str(), &raw), config_arg);
      }
      const SimConfig config(raw);
      if (g.seed) check(ds_sim_config_set_seed(config.get(), *g.seed), "seed");
      check(ds_simulate(config.get(), out_arg.c_str()), out_arg);
      return kExitOk;
    }

    if (*bench) {
      const auto ts = parse_list(t_list, "--t");
      const auto ns = parse_list(n_list, "--n");
      char* csv = nullptr;
      check(ds_bench(ts.data(), ts.size(), ns.data(), ns.size(), repeats, g.seed.value_or(1), &csv), "bench");
      const CString text(csv);
      write_file(out_arg, text.get());
      std::cout << text.get();
      return kExitOk;
    }

    if (*plot) {
      ds_odf* odf_raw = nullptr;
      check(ds_odf_load(odf_arg.c_str(), &odf_raw), odf_arg);
      const Odf odf(odf_raw);
      const Annotation result = load_annotation(result_arg);
      check(ds_plot_data_save(odf.get(), result.get(), out_arg.c_str()), out_arg);
      return kExitOk;
    }
  } catch (const Failure& f) {
    return f.exit_code;
  }
  return kExitInput;
}
