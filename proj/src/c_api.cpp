#include "duraseg/duraseg.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <map>
#include <new>
#include <string>

#include <json.hpp>

#include "duraseg/bench.hpp"
#include "duraseg/core.hpp"
#include "duraseg/dataprep.hpp"
#include "duraseg/decoder.hpp"
#include "duraseg/error.hpp"
#include "duraseg/eval.hpp"
#include "duraseg/hierarchy.hpp"
#include "duraseg/hsmm.hpp"
#include "duraseg/io.hpp"
#include "duraseg/prior.hpp"
#include "duraseg/synth.hpp"

struct ds_annotation {
  duraseg::PhraseAnnotation value;
};

struct ds_odf {
  duraseg::OdfPair value;
};

struct ds_emissions {
  duraseg::EmissionMatrix value;
};

struct ds_targets {
  duraseg::TrainingTargets value;
};

struct ds_evaluator {
  double tolerance;
  std::vector<duraseg::PhraseScore> syllable;
  std::vector<duraseg::PhraseScore> phoneme;
};

struct ds_sim_config {
  duraseg::SimConfig value;
};

namespace {

using duraseg::Error;
using duraseg::ErrorCode;
namespace fs = std::filesystem;

thread_local std::string g_last_error;

ds_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadInput: return DS_ERR_BAD_INPUT;
    case ErrorCode::kIo: return DS_ERR_IO;
    case ErrorCode::kParse: return DS_ERR_PARSE;
    case ErrorCode::kAllSilence: return DS_ERR_ALL_SILENCE;
    case ErrorCode::kInvariantViolation: return DS_ERR_INVARIANT;
    case ErrorCode::kInfeasiblePhrase: return DS_ERR_INFEASIBLE_PHRASE;
    case ErrorCode::kInfeasibleSyllable: return DS_ERR_INFEASIBLE_SYLLABLE;
    case ErrorCode::kInfeasibleAlignment: return DS_ERR_INFEASIBLE_ALIGNMENT;
    case ErrorCode::kBadPath: return DS_ERR_BAD_PATH;
    case ErrorCode::kTooLarge: return DS_ERR_TOO_LARGE;
    case ErrorCode::kDegenerateSupport: return DS_ERR_DEGENERATE_SUPPORT;
    case ErrorCode::kEmptyPhrase: return DS_ERR_EMPTY_PHRASE;
    case ErrorCode::kOnsetOutOfRange: return DS_ERR_ONSET_OUT_OF_RANGE;
  }
  return DS_ERR_INTERNAL;
}

ds_status fail(ds_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
ds_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return DS_OK;
  } catch (const duraseg::InfeasibleSyllableError& e) {
    return fail(DS_ERR_INFEASIBLE_SYLLABLE, e.what());
  } catch (const Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(DS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DS_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* ptr, const char* what) {
  if (ptr == nullptr) throw Error(ErrorCode::kBadInput, std::string(what) + " must not be NULL");
}

char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

duraseg::DecoderParams decoder_params(const ds_params* params) {
  ds_params p;
  ds_params_default(&p);
  if (params != nullptr) p = *params;
  return {p.gamma, p.epsilon};
}

ds_params resolve(const ds_params* params) {
  ds_params p;
  ds_params_default(&p);
  return params != nullptr ? *params : p;
}

duraseg::Level to_level(ds_level level) {
  switch (level) {
    case DS_LEVEL_SYLLABLE: return duraseg::Level::kSyllable;
    case DS_LEVEL_PHONEME: return duraseg::Level::kPhoneme;
  }
  throw Error(ErrorCode::kBadInput, "unknown level");
}

template <typename Handle, typename Value>
void emit(Handle** out, Value&& value) {
  require(out, "output handle");
  *out = new Handle{std::forward<Value>(value)};
}

}  // namespace

extern "C" {

const char* ds_last_error(void) { return g_last_error.c_str(); }

const char* ds_status_name(ds_status status) {
  switch (status) {
    case DS_OK: return "ok";
    case DS_ERR_BAD_INPUT: return "bad_input";
    case DS_ERR_IO: return "io";
    case DS_ERR_PARSE: return "parse";
    case DS_ERR_ALL_SILENCE: return "all_silence";
    case DS_ERR_INVARIANT: return "invariant_violation";
    case DS_ERR_INFEASIBLE_PHRASE: return "infeasible_phrase";
    case DS_ERR_INFEASIBLE_SYLLABLE: return "infeasible_syllable";
    case DS_ERR_INFEASIBLE_ALIGNMENT: return "infeasible_alignment";
    case DS_ERR_BAD_PATH: return "bad_path";
    case DS_ERR_TOO_LARGE: return "too_large";
    case DS_ERR_DEGENERATE_SUPPORT: return "degenerate_support";
    case DS_ERR_EMPTY_PHRASE: return "empty_phrase";
    case DS_ERR_ONSET_OUT_OF_RANGE: return "onset_out_of_range";
    case DS_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
    case DS_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

int ds_status_is_infeasible(ds_status status) {
  return status == DS_ERR_INFEASIBLE_PHRASE || status == DS_ERR_INFEASIBLE_SYLLABLE ||
         status == DS_ERR_INFEASIBLE_ALIGNMENT;
}

void ds_params_default(ds_params* params) {
  if (params == nullptr) return;
  params->gamma = duraseg::kDefaultGamma;
  params->epsilon = duraseg::kDefaultEpsilon;
  params->tol_seconds = duraseg::kDefaultToleranceSeconds;
  params->hop_seconds = duraseg::kDefaultHopSeconds;
}

void ds_string_free(char* text) { std::free(text); }

const char* ds_version(void) { return "0.1.0"; }

ds_status ds_annotation_load(const char* path, ds_annotation** out) {
  return guarded([&] {
    require(path, "path");
    emit(out, duraseg::io::parse_annotation(duraseg::io::read_text(path)));
  });
}

ds_status ds_annotation_parse(const char* json, ds_annotation** out) {
  return guarded([&] {
    require(json, "json");
    emit(out, duraseg::io::parse_annotation(json));
  });
}

ds_status ds_annotation_save(const ds_annotation* annotation, const char* path) {
  return guarded([&] {
    require(annotation, "annotation");
    require(path, "path");
    duraseg::io::write_text(path, duraseg::io::annotation_to_json(annotation->value));
  });
}

ds_status ds_annotation_to_json(const ds_annotation* annotation, char** json) {
  return guarded([&] {
    require(annotation, "annotation");
    require(json, "json");
    *json = copy_string(duraseg::io::annotation_to_json(annotation->value));
  });
}

void ds_annotation_free(ds_annotation* annotation) { delete annotation; }

ds_status ds_annotation_merge_silences(const ds_annotation* raw, ds_annotation** out) {
  return guarded([&] {
    require(raw, "annotation");
    emit(out, duraseg::merge_silences(raw->value));
  });
}

const char* ds_annotation_phrase_id(const ds_annotation* annotation) {
  return annotation != nullptr ? annotation->value.phrase_id.c_str() : "";
}

size_t ds_annotation_count(const ds_annotation* annotation, ds_level level) {
  if (annotation == nullptr) return 0;
  return level == DS_LEVEL_SYLLABLE ? annotation->value.syllables.size() : annotation->value.num_phonemes();
}

ds_status ds_annotation_onsets(const ds_annotation* annotation, ds_level level, double* onsets,
                               size_t capacity, size_t* count) {
  ds_status status = DS_OK;
  const ds_status guard = guarded([&] {
    require(annotation, "annotation");
    const auto values = annotation->value.onsets(to_level(level));
    if (count != nullptr) *count = values.size();
    if (capacity < values.size()) {
      status = fail(DS_ERR_BUFFER_TOO_SMALL, "onset buffer holds fewer entries than available");
      return;
    }
    if (!values.empty()) require(onsets, "onsets");
    std::copy(values.begin(), values.end(), onsets);
  });
  return guard != DS_OK ? guard : status;
}

ds_status ds_odf_load(const char* path, ds_odf** out) {
  return guarded([&] {
    require(path, "path");
    emit(out, duraseg::io::parse_odf(duraseg::io::read_text(path)));
  });
}

ds_status ds_odf_create(double hop_seconds, double phrase_start, const double* syllable, const double* phoneme,
                        size_t n_frames, ds_odf** out) {
  return guarded([&] {
    require(syllable, "syllable");
    require(phoneme, "phoneme");
    emit(out, duraseg::OdfPair(duraseg::OnsetCurve({syllable, syllable + n_frames}, hop_seconds),
                               duraseg::OnsetCurve({phoneme, phoneme + n_frames}, hop_seconds), phrase_start));
  });
}

ds_status ds_odf_save(const ds_odf* odf, const char* path) {
  return guarded([&] {
    require(odf, "odf");
    require(path, "path");
    duraseg::io::write_text(path, duraseg::io::odf_to_json(odf->value));
  });
}

size_t ds_odf_frames(const ds_odf* odf) { return odf != nullptr ? odf->value.syllable.size() : 0; }

void ds_odf_free(ds_odf* odf) { delete odf; }

ds_status ds_prior_log_density(double mu_seconds, double gamma, double d_seconds, double* out) {
  return guarded([&] {
    require(out, "out");
    if (!(d_seconds > 0.0)) throw Error(ErrorCode::kBadInput, "duration must be positive");
    *out = duraseg::PriorDurationModel(mu_seconds, gamma).log_density(d_seconds);
  });
}

ds_status ds_decode_onsets(const double* odf, size_t n_frames, double hop_seconds, const double* durations,
                           size_t n_durations, const ds_params* params, size_t* onsets, double* score) {
  return guarded([&] {
    require(odf, "odf");
    require(durations, "durations");
    const duraseg::OnsetCurve curve({odf, odf + n_frames}, hop_seconds);
    const auto path = duraseg::decode_onsets(curve, {durations, n_durations}, decoder_params(params));
    if (!path.onsets.empty()) require(onsets, "onsets");
    std::copy(path.onsets.begin(), path.onsets.end(), onsets);
    if (score != nullptr) *score = path.score;
  });
}

ds_status ds_score_path(const double* odf, size_t n_frames, double hop_seconds, const double* durations,
                        size_t n_durations, const size_t* onsets, const ds_params* params, double* score) {
  return guarded([&] {
    require(odf, "odf");
    require(durations, "durations");
    require(score, "score");
    if (n_durations > 1) require(onsets, "onsets");
    const duraseg::OnsetCurve curve({odf, odf + n_frames}, hop_seconds);
    const std::size_t n_onsets = n_durations > 0 ? n_durations - 1 : 0;
    *score = duraseg::score_path(curve, {durations, n_durations}, {onsets, n_onsets}, decoder_params(params));
  });
}

ds_status ds_segment(const ds_odf* odf, const ds_annotation* teacher, const ds_params* params,
                     ds_annotation** out, size_t* failed_syllable) {
  return guarded([&] {
    require(odf, "odf");
    require(teacher, "teacher");
    try {
      const auto merged = duraseg::merge_silences(teacher->value);
      const auto durations = duraseg::build_duration_sequences(merged);
      emit(out, duraseg::segment_phrase(odf->value, durations, decoder_params(params), merged.phrase_id));
    } catch (const duraseg::InfeasibleSyllableError& e) {
      if (failed_syllable != nullptr) *failed_syllable = e.syllable_index();
      throw;
    }
  });
}

ds_status ds_emissions_load(const char* path, double hop_seconds, ds_emissions** out) {
  return guarded([&] {
    require(path, "path");
    emit(out, duraseg::io::parse_emissions_csv(duraseg::io::read_text(path), hop_seconds));
  });
}

ds_status ds_emissions_save(const ds_emissions* emissions, const char* path) {
  return guarded([&] {
    require(emissions, "emissions");
    require(path, "path");
    duraseg::io::write_text(path, duraseg::io::emissions_to_csv(emissions->value));
  });
}

size_t ds_emissions_frames(const ds_emissions* emissions) {
  return emissions != nullptr ? emissions->value.n_frames() : 0;
}

size_t ds_emissions_states(const ds_emissions* emissions) {
  return emissions != nullptr ? emissions->value.n_states() : 0;
}

void ds_emissions_free(ds_emissions* emissions) { delete emissions; }

ds_status ds_align(const ds_emissions* emissions, const ds_annotation* teacher, const ds_params* params,
                   double phrase_start, ds_annotation** out) {
  return guarded([&] {
    require(emissions, "emissions");
    require(teacher, "teacher");
    const auto merged = duraseg::merge_silences(teacher->value);
    const auto durations = duraseg::build_duration_sequences(merged);
    emit(out, duraseg::align_phrase(emissions->value, durations, resolve(params).gamma, phrase_start,
                                    merged.phrase_id));
  });
}

ds_status ds_hsmm_align(const double* log_probs, size_t n_frames, size_t n_states, const double* mu_seconds,
                        const ds_params* params, size_t max_frames, size_t* durations, double* score) {
  return guarded([&] {
    require(log_probs, "log_probs");
    require(mu_seconds, "mu_seconds");
    require(durations, "durations");
    const ds_params p = resolve(params);
    const duraseg::EmissionMatrix emissions({log_probs, log_probs + n_frames * n_states}, n_frames,
                                            std::vector<std::string>(n_states, "s"), p.hop_seconds);
    std::vector<duraseg::OccupancyDistribution> occupancies;
    for (std::size_t s = 0; s < n_states; ++s) {
      occupancies.push_back(duraseg::discretize_occupancy(
          mu_seconds[s], p.gamma, emissions.grid(),
          max_frames > 0 ? std::optional<std::size_t>(max_frames) : std::nullopt));
    }
    const auto alignment = duraseg::hsmm_forced_align(emissions, occupancies);
    for (std::size_t s = 0; s < n_states; ++s) durations[s] = alignment.spans[s].frames;
    if (score != nullptr) *score = alignment.score;
  });
}

ds_status ds_onset_prf(const double* detected, size_t n_detected, const double* reference, size_t n_reference,
                       double tol_seconds, ds_onset_result* out) {
  return guarded([&] {
    require(out, "out");
    if (n_detected > 0) require(detected, "detected");
    if (n_reference > 0) require(reference, "reference");
    const auto match = duraseg::onset_prf({detected, n_detected}, {reference, n_reference}, tol_seconds);
    *out = {match.true_positives, match.false_positives, match.false_negatives,
            match.precision(),    match.recall(),          match.f1()};
  });
}

ds_status ds_segmentation_accuracy(const ds_annotation* detected, const ds_annotation* reference, ds_level level,
                                   double* out) {
  return guarded([&] {
    require(detected, "detected");
    require(reference, "reference");
    require(out, "out");
    *out = duraseg::segmentation_accuracy(detected->value, reference->value, to_level(level));
  });
}

ds_status ds_evaluator_create(double tol_seconds, ds_evaluator** out) {
  return guarded([&] {
    if (!(tol_seconds > 0.0)) throw Error(ErrorCode::kBadInput, "tolerance must be positive");
    require(out, "out");
    *out = new ds_evaluator{tol_seconds, {}, {}};
  });
}

ds_status ds_evaluator_add(ds_evaluator* evaluator, const ds_annotation* reference, const ds_annotation* detected) {
  return guarded([&] {
    require(evaluator, "evaluator");
    require(reference, "reference");
    require(detected, "detected");
    auto syl = duraseg::score_phrase(detected->value, reference->value, duraseg::Level::kSyllable,
                                     evaluator->tolerance);
    auto pho = duraseg::score_phrase(detected->value, reference->value, duraseg::Level::kPhoneme,
                                     evaluator->tolerance);
    evaluator->syllable.push_back(syl);
    evaluator->phoneme.push_back(pho);
  });
}

ds_status ds_evaluator_report(const ds_evaluator* evaluator, ds_level level, ds_level_report* out) {
  return guarded([&] {
    require(evaluator, "evaluator");
    require(out, "out");
    const auto report = duraseg::aggregate(level == DS_LEVEL_SYLLABLE ? evaluator->syllable : evaluator->phoneme);
    *out = {report.precision, report.recall, report.f1, report.segmentation};
  });
}

ds_status ds_evaluator_report_json(const ds_evaluator* evaluator, unsigned levels, char** json) {
  return guarded([&] {
    require(evaluator, "evaluator");
    require(json, "json");
    if ((levels & 3u) == 0) throw Error(ErrorCode::kBadInput, "no level selected");
    std::map<duraseg::Level, duraseg::LevelReport> reports;
    if (levels & 1u) reports[duraseg::Level::kSyllable] = duraseg::aggregate(evaluator->syllable);
    if (levels & 2u) reports[duraseg::Level::kPhoneme] = duraseg::aggregate(evaluator->phoneme);
    *json = copy_string(duraseg::io::report_to_json(reports, evaluator->syllable.size()));
  });
}

size_t ds_evaluator_phrases(const ds_evaluator* evaluator) {
  return evaluator != nullptr ? evaluator->syllable.size() : 0;
}

void ds_evaluator_free(ds_evaluator* evaluator) { delete evaluator; }

ds_status ds_targets_create(const ds_annotation* annotation, double hop_seconds, size_t n_frames,
                            ds_targets** out) {
  return guarded([&] {
    require(annotation, "annotation");
    const auto merged = duraseg::merge_silences(annotation->value);
    const duraseg::FrameGrid grid =
        n_frames == 0 ? duraseg::grid_for(merged, hop_seconds) : duraseg::FrameGrid(hop_seconds, n_frames);
    emit(out, duraseg::make_training_targets(merged, grid));
  });
}

size_t ds_targets_frames(const ds_targets* targets) {
  return targets != nullptr ? targets->value.syllable.labels.size() : 0;
}

ds_status ds_targets_get(const ds_targets* targets, ds_level level, size_t frame, int* label, double* weight) {
  return guarded([&] {
    require(targets, "targets");
    const auto& seq = to_level(level) == duraseg::Level::kSyllable ? targets->value.syllable : targets->value.phoneme;
    if (frame >= seq.labels.size()) throw Error(ErrorCode::kBadInput, "frame index out of range");
    if (label != nullptr) *label = seq.labels[frame];
    if (weight != nullptr) *weight = seq.weights[frame];
  });
}

ds_status ds_targets_save_csv(const ds_targets* targets, const char* path) {
  return guarded([&] {
    require(targets, "targets");
    require(path, "path");
    duraseg::io::write_text(path, duraseg::io::targets_to_csv(targets->value));
  });
}

void ds_targets_free(ds_targets* targets) { delete targets; }

ds_status ds_sim_config_default(ds_sim_config** out) {
  return guarded([&] { emit(out, duraseg::SimConfig{}); });
}

ds_status ds_sim_config_load(const char* path, ds_sim_config** out) {
  return guarded([&] {
    require(path, "path");
    emit(out, duraseg::io::parse_sim_config(duraseg::io::read_text(path)));
  });
}

ds_status ds_sim_config_parse(const char* json, ds_sim_config** out) {
  return guarded([&] {
    require(json, "json");
    emit(out, duraseg::io::parse_sim_config(json));
  });
}

ds_status ds_sim_config_set_seed(ds_sim_config* config, uint64_t seed) {
  return guarded([&] {
    require(config, "config");
    config->value.seed = seed;
  });
}

void ds_sim_config_free(ds_sim_config* config) { delete config; }

ds_status ds_simulate(const ds_sim_config* config, const char* dir) {
  return guarded([&] {
    require(config, "config");
    require(dir, "dir");
    const fs::path root(dir);
    std::error_code ec;
    for (const char* sub : {"teacher", "student", "odf", "emissions"}) {
      fs::create_directories(root / sub, ec);
      if (ec) throw Error(ErrorCode::kIo, "cannot create '" + (root / sub).string() + "': " + ec.message());
    }
    nlohmann::ordered_json manifest;
    manifest["config"] = nlohmann::ordered_json::parse(duraseg::io::sim_config_to_json(config->value));
    manifest["phrases"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < config->value.n_phrases; ++i) {
      const auto sim = duraseg::simulate_phrase(config->value, i);
      const std::string name = sim.student.phrase_id;
      duraseg::io::write_text(root / "teacher" / (name + ".json"), duraseg::io::annotation_to_json(sim.teacher));
      duraseg::io::write_text(root / "student" / (name + ".json"), duraseg::io::annotation_to_json(sim.student));
      duraseg::io::write_text(root / "odf" / (name + ".json"), duraseg::io::odf_to_json(sim.odfs));
      duraseg::io::write_text(root / "emissions" / (name + ".csv"), duraseg::io::emissions_to_csv(sim.emissions));
      nlohmann::ordered_json entry;
      entry["phrase_id"] = name;
      entry["seed"] = duraseg::derive_seed(config->value.seed, i);
      manifest["phrases"].push_back(std::move(entry));
    }
    duraseg::io::write_text(root / "manifest.json", manifest.dump(2) + "\n");
  });
}

ds_status ds_sim_phrase(const ds_sim_config* config, size_t index, ds_annotation** teacher,
                        ds_annotation** student, ds_odf** odf, ds_emissions** emissions) {
  return guarded([&] {
    require(config, "config");
    auto sim = duraseg::simulate_phrase(config->value, index);
    if (teacher != nullptr) *teacher = new ds_annotation{std::move(sim.teacher)};
    if (student != nullptr) *student = new ds_annotation{std::move(sim.student)};
    if (odf != nullptr) *odf = new ds_odf{std::move(sim.odfs)};
    if (emissions != nullptr) *emissions = new ds_emissions{std::move(sim.emissions)};
  });
}

ds_status ds_bench(const size_t* frames, size_t n_frames, const size_t* segments, size_t n_segments,
                   size_t repeats, uint64_t seed, char** csv) {
  return guarded([&] {
    require(frames, "frames");
    require(segments, "segments");
    require(csv, "csv");
    duraseg::BenchOptions options;
    options.repeats = repeats;
    options.seed = seed;
    const auto rows = duraseg::run_benchmark({frames, n_frames}, {segments, n_segments}, options);
    *csv = copy_string(duraseg::bench_to_csv(rows));
  });
}

ds_status ds_plot_data_save(const ds_odf* odf, const ds_annotation* result, const char* path) {
  return guarded([&] {
    require(odf, "odf");
    require(result, "result");
    require(path, "path");
    duraseg::io::write_text(path, duraseg::io::plot_data_csv(odf->value, result->value));
  });
}

}  // extern "C"
