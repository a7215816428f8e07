#pragma once

// File formats: annotation / ODF / report JSON and emission / target CSV.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "duraseg/core.hpp"
#include "duraseg/dataprep.hpp"
#include "duraseg/eval.hpp"
#include "duraseg/hierarchy.hpp"
#include "duraseg/hsmm.hpp"
#include "duraseg/synth.hpp"

namespace duraseg::io {

std::string read_text(const std::filesystem::path& path);
/// Writes through a temporary file so readers never see a partial file.
void write_text(const std::filesystem::path& path, std::string_view text);

/// Shortest representation that reads back to the same double.
std::string format_double(double value);

PhraseAnnotation parse_annotation(std::string_view json);
std::string annotation_to_json(const PhraseAnnotation& annotation);

/// {"hop_seconds": h, "phrase_start": s (optional, default 0),
///  "syllable": [...], "phoneme": [...]}
OdfPair parse_odf(std::string_view json);
std::string odf_to_json(const OdfPair& odfs);

/// First row: state labels. Then one row per frame of log probabilities.
EmissionMatrix parse_emissions_csv(std::string_view csv, double hop_seconds = kDefaultHopSeconds);
std::string emissions_to_csv(const EmissionMatrix& emissions);

/// frame_index,syllable_label,syllable_weight,phoneme_label,phoneme_weight
std::string targets_to_csv(const TrainingTargets& targets);

/// {"<level>": {"precision", "recall", "f1", "segmentation"}, "n_phrases", "pooling"}
std::string report_to_json(const std::map<Level, LevelReport>& levels, std::size_t n_phrases);

SimConfig parse_sim_config(std::string_view json);
std::string sim_config_to_json(const SimConfig& config);

}  // namespace duraseg::io

namespace duraseg::io {

/// Frame-indexed curves with onset markers of a decoded phrase:
/// frame,time,syllable_odf,phoneme_odf,syllable_onset,phoneme_onset
std::string plot_data_csv(const OdfPair& odfs, const PhraseAnnotation& result);

}  // namespace duraseg::io
