// Exercises the shared library through its C interface only.

#include "duraseg/duraseg.h"

#include <cmath>
#include <cstring>
#include <algorithm>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace {

const char* kTeacher = R"({"phrase_id": "t", "syllables": [
  {"label": "ka", "onset": 0, "offset": 2, "phonemes": [
    {"label": "k", "onset": 0, "offset": 1}, {"label": "a", "onset": 1, "offset": 2}]},
  {"label": "o", "onset": 2, "offset": 4, "phonemes": [{"label": "o", "onset": 2, "offset": 4}]}]})";

struct AnnotationDeleter {
  void operator()(ds_annotation* a) const { ds_annotation_free(a); }
};
using Annotation = std::unique_ptr<ds_annotation, AnnotationDeleter>;

Annotation parse(const char* json) {
  ds_annotation* a = nullptr;
  EXPECT_EQ(ds_annotation_parse(json, &a), DS_OK) << ds_last_error();
  return Annotation(a);
}

ds_params defaults() {
  ds_params p;
  ds_params_default(&p);
  return p;
}

TEST(CApi, DefaultsAndNames) {
  const ds_params p = defaults();
  EXPECT_EQ(p.gamma, 0.35);
  EXPECT_EQ(p.epsilon, 1e-10);
  EXPECT_EQ(p.tol_seconds, 0.025);
  EXPECT_EQ(p.hop_seconds, 0.01);
  EXPECT_STREQ(ds_status_name(DS_OK), "ok");
  EXPECT_TRUE(ds_status_is_infeasible(DS_ERR_INFEASIBLE_SYLLABLE));
  EXPECT_FALSE(ds_status_is_infeasible(DS_ERR_PARSE));
  EXPECT_GT(std::strlen(ds_version()), 0u);
}

TEST(CApi, PriorDensity) {
  double v = 0.0;
  ASSERT_EQ(ds_prior_log_density(1.0, 0.35, 1.0, &v), DS_OK);
  EXPECT_NEAR(v, 0.1308835912940051, 1e-15);
  EXPECT_EQ(ds_prior_log_density(-1.0, 0.35, 1.0, &v), DS_ERR_BAD_INPUT);
  EXPECT_GT(std::strlen(ds_last_error()), 0u);
}

TEST(CApi, DecodeWorkedExample) {
  const double odf[] = {0.1, 0.2, 0.9, 0.2, 0.1};
  const double durations[] = {2.0, 2.0};
  const ds_params p = defaults();
  size_t onset = 0;
  double score = 0.0;
  ASSERT_EQ(ds_decode_onsets(odf, 5, 1.0, durations, 2, &p, &onset, &score), DS_OK);
  EXPECT_EQ(onset, 2u);
  double check = 0.0;
  ASSERT_EQ(ds_score_path(odf, 5, 1.0, durations, 2, &onset, &p, &check), DS_OK);
  EXPECT_EQ(check, score);
  const size_t bad = 4;
  EXPECT_EQ(ds_score_path(odf, 5, 1.0, durations, 2, &bad, &p, &check), DS_ERR_BAD_PATH);
  const double many[] = {1.0, 1.0, 1.0, 1.0, 1.0};
  size_t out[4];
  EXPECT_EQ(ds_decode_onsets(odf, 5, 1.0, many, 5, &p, out, &score), DS_ERR_INFEASIBLE_PHRASE);
  EXPECT_EQ(ds_decode_onsets(nullptr, 5, 1.0, durations, 2, &p, &onset, &score), DS_ERR_BAD_INPUT);
}

TEST(CApi, SegmentAndEvaluate) {
  const auto teacher = parse(kTeacher);
  const double syl[] = {0.1, 0.2, 0.9, 0.2, 0.1};
  const double pho[] = {0.1, 0.9, 0.1, 0.1, 0.1};
  ds_odf* odf = nullptr;
  ASSERT_EQ(ds_odf_create(1.0, 0.0, syl, pho, 5, &odf), DS_OK);
  EXPECT_EQ(ds_odf_frames(odf), 5u);
  const ds_params p = defaults();
  ds_annotation* raw = nullptr;
  ASSERT_EQ(ds_segment(odf, teacher.get(), &p, &raw, nullptr), DS_OK) << ds_last_error();
  const Annotation result(raw);
  double onsets[3];
  size_t count = 0;
  ASSERT_EQ(ds_annotation_onsets(result.get(), DS_LEVEL_PHONEME, onsets, 3, &count), DS_OK);
  ASSERT_EQ(count, 3u);
  EXPECT_EQ(onsets[0], 0.0);
  EXPECT_EQ(onsets[1], 1.0);
  EXPECT_EQ(onsets[2], 2.0);
  EXPECT_EQ(ds_annotation_onsets(result.get(), DS_LEVEL_PHONEME, onsets, 2, &count), DS_ERR_BUFFER_TOO_SMALL);
  EXPECT_EQ(count, 3u);

  double acc = 0.0;
  ASSERT_EQ(ds_segmentation_accuracy(result.get(), teacher.get(), DS_LEVEL_PHONEME, &acc), DS_OK);
  EXPECT_EQ(acc, 1.0);

  ds_evaluator* ev = nullptr;
  ASSERT_EQ(ds_evaluator_create(p.tol_seconds, &ev), DS_OK);
  ASSERT_EQ(ds_evaluator_add(ev, teacher.get(), result.get()), DS_OK);
  EXPECT_EQ(ds_evaluator_phrases(ev), 1u);
  ds_level_report report;
  ASSERT_EQ(ds_evaluator_report(ev, DS_LEVEL_SYLLABLE, &report), DS_OK);
  EXPECT_EQ(report.f1, 1.0);
  EXPECT_EQ(report.segmentation, 1.0);
  char* json = nullptr;
  ASSERT_EQ(ds_evaluator_report_json(ev, 3, &json), DS_OK);
  EXPECT_NE(std::string(json).find("\"pooling\": \"micro\""), std::string::npos);
  ds_string_free(json);
  ds_evaluator_free(ev);
  ds_odf_free(odf);
}

TEST(CApi, InfeasibleSyllableReportsIndex) {
  const auto teacher = parse(R"({"syllables": [
    {"label": "a", "onset": 0, "offset": 0.02, "phonemes": [{"label": "a", "onset": 0, "offset": 0.02}]},
    {"label": "b", "onset": 0.02, "offset": 0.10, "phonemes": [
      {"label": "p", "onset": 0.02, "offset": 0.04}, {"label": "q", "onset": 0.04, "offset": 0.06},
      {"label": "r", "onset": 0.06, "offset": 0.08}, {"label": "s", "onset": 0.08, "offset": 0.10}]}]})");
  const double syl[] = {0.01, 0.01, 1.0, 0.01, 0.01, 0.01};
  const double pho[] = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
  ds_odf* odf = nullptr;
  ASSERT_EQ(ds_odf_create(0.01, 0.0, syl, pho, 6, &odf), DS_OK);
  const ds_params p = defaults();
  ds_annotation* out = nullptr;
  size_t failed = 99;
  EXPECT_EQ(ds_segment(odf, teacher.get(), &p, &out, &failed), DS_ERR_INFEASIBLE_SYLLABLE);
  EXPECT_EQ(failed, 1u);
  EXPECT_EQ(out, nullptr);
  ds_odf_free(odf);
}

TEST(CApi, HsmmRawInterface) {
  const double lp[] = {0.0, -10.0, 0.0, -10.0, -10.0, 0.0, -10.0, 0.0};
  const double mu[] = {0.02, 0.02};
  const ds_params p = defaults();
  size_t durations[2];
  double score = 0.0;
  ASSERT_EQ(ds_hsmm_align(lp, 4, 2, mu, &p, 0, durations, &score), DS_OK);
  EXPECT_EQ(durations[0], 2u);
  EXPECT_EQ(durations[1], 2u);
  EXPECT_EQ(ds_hsmm_align(lp, 4, 2, mu, &p, 1, durations, &score), DS_ERR_INFEASIBLE_ALIGNMENT);
}

TEST(CApi, OnsetPrfAndTargets) {
  const double ref[] = {1.0, 2.0, 3.0}, det[] = {1.01, 2.5};
  ds_onset_result r;
  ASSERT_EQ(ds_onset_prf(det, 2, ref, 3, 0.025, &r), DS_OK);
  EXPECT_EQ(r.true_positives, 1u);
  EXPECT_NEAR(r.f1, 0.4, 1e-12);

  const auto a = parse(R"({"syllables": [
    {"label": "a", "onset": 0, "offset": 0.1, "phonemes": [{"label": "a", "onset": 0, "offset": 0.1}]},
    {"label": "b", "onset": 0.1, "offset": 0.3, "phonemes": [{"label": "b", "onset": 0.1, "offset": 0.3}]}]})");
  ds_targets* t = nullptr;
  ASSERT_EQ(ds_targets_create(a.get(), 0.01, 0, &t), DS_OK);
  EXPECT_EQ(ds_targets_frames(t), 31u);
  int label = 0;
  double weight = 0.0;
  ASSERT_EQ(ds_targets_get(t, DS_LEVEL_SYLLABLE, 9, &label, &weight), DS_OK);
  EXPECT_EQ(label, 1);
  EXPECT_EQ(weight, 0.25);
  EXPECT_EQ(ds_targets_get(t, DS_LEVEL_SYLLABLE, 31, &label, &weight), DS_ERR_BAD_INPUT);
  ds_targets_free(t);
  EXPECT_EQ(ds_targets_create(a.get(), 0.01, 5, &t), DS_ERR_ONSET_OUT_OF_RANGE);
}

TEST(CApi, SilenceMergingAndErrors) {
  ds_annotation* a = nullptr;
  EXPECT_EQ(ds_annotation_parse("{not json", &a), DS_ERR_PARSE);
  EXPECT_EQ(a, nullptr);
  EXPECT_EQ(ds_annotation_load("/nonexistent/file.json", &a), DS_ERR_IO);
  const auto silent = parse(R"({"syllables": [
    {"label": "SIL", "onset": 0, "offset": 1, "phonemes": [{"label": "SIL", "onset": 0, "offset": 1}]}]})");
  EXPECT_EQ(ds_annotation_merge_silences(silent.get(), &a), DS_ERR_ALL_SILENCE);
  const auto mixed = parse(R"({"phrase_id": "m", "syllables": [
    {"label": "SIL", "onset": 0, "offset": 1, "phonemes": [{"label": "SIL", "onset": 0, "offset": 1}]},
    {"label": "a", "onset": 1, "offset": 2, "phonemes": [{"label": "a", "onset": 1, "offset": 2}]},
    {"label": "SIL", "onset": 2, "offset": 2.5, "phonemes": [{"label": "SIL", "onset": 2, "offset": 2.5}]},
    {"label": "b", "onset": 2.5, "offset": 3, "phonemes": [{"label": "b", "onset": 2.5, "offset": 3}]}]})");
  ASSERT_EQ(ds_annotation_merge_silences(mixed.get(), &a), DS_OK);
  const Annotation merged(a);
  EXPECT_STREQ(ds_annotation_phrase_id(merged.get()), "m");
  EXPECT_EQ(ds_annotation_count(merged.get(), DS_LEVEL_SYLLABLE), 2u);
  double onsets[2];
  size_t n = 0;
  ASSERT_EQ(ds_annotation_onsets(merged.get(), DS_LEVEL_SYLLABLE, onsets, 2, &n), DS_OK);
  EXPECT_EQ(onsets[0], 1.0);
  EXPECT_EQ(onsets[1], 2.5);
  ds_annotation_free(nullptr);
  ds_odf_free(nullptr);
}

TEST(CApi, SimulationIsDeterministic) {
  ds_sim_config* config = nullptr;
  ASSERT_EQ(ds_sim_config_parse(R"({"n_phrases": 3, "jitter_sigma": 0.1})", &config), DS_OK);
  ASSERT_EQ(ds_sim_config_set_seed(config, 5), DS_OK);
  ds_annotation *t1 = nullptr, *t2 = nullptr;
  ds_odf* odf = nullptr;
  ASSERT_EQ(ds_sim_phrase(config, 1, &t1, nullptr, &odf, nullptr), DS_OK);
  ASSERT_EQ(ds_sim_phrase(config, 1, &t2, nullptr, nullptr, nullptr), DS_OK);
  char *j1 = nullptr, *j2 = nullptr;
  ds_annotation_to_json(t1, &j1);
  ds_annotation_to_json(t2, &j2);
  EXPECT_STREQ(j1, j2);
  ds_string_free(j1);
  ds_string_free(j2);

  const auto dir = std::filesystem::temp_directory_path() / "duraseg_c_api_sim";
  std::filesystem::remove_all(dir);
  ASSERT_EQ(ds_simulate(config, dir.c_str()), DS_OK) << ds_last_error();
  EXPECT_TRUE(std::filesystem::exists(dir / "manifest.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "odf" / "phrase_0002.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "emissions" / "phrase_0000.csv"));

  ds_annotation_free(t1);
  ds_annotation_free(t2);
  ds_odf_free(odf);
  ds_sim_config_free(config);
  EXPECT_EQ(ds_sim_config_parse(R"({"bogus": 1})", &config), DS_ERR_PARSE);
}

TEST(CApi, BenchProducesCsv) {
  const size_t frames[] = {50, 100};
  const size_t segments[] = {3};
  char* csv = nullptr;
  ASSERT_EQ(ds_bench(frames, 2, segments, 1, 1, 1, &csv), DS_OK);
  const std::string text(csv);
  ds_string_free(csv);
  EXPECT_EQ(text.rfind("T,N,decoder_seconds,hsmm_seconds,hsmm_over_decoder\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

}  // namespace
