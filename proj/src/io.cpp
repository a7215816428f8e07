#include "duraseg/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "duraseg/error.hpp"

namespace duraseg::io {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::kParse, what); }

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    parse_error(std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
T field(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) parse_error(std::string("missing field '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception&) {
    parse_error(std::string("field '") + key + "' has the wrong type");
  }
}

Segment parse_segment(const Json& obj) {
  return {field<std::string>(obj, "label"), field<double>(obj, "onset"), field<double>(obj, "offset")};
}

Json segment_json(const Segment& seg) {
  Json obj;
  obj["label"] = seg.label;
  obj["onset"] = seg.onset;
  obj["offset"] = seg.offset;
  return obj;
}

std::vector<double> curve_values(const Json& obj, const char* key) {
  auto values = field<std::vector<Json>>(obj, key);
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) {
    if (!v.is_number()) parse_error(std::string("'") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    parse_error("not a number: '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto line : split(text, '\n')) {
    if (!trim(line).empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorCode::kIo, "short write to '" + path.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot move result into '" + path.string() + "': " + ec.message());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error(ErrorCode::kBadInput, "unprintable number");
  return std::string(buf, ptr);
}

PhraseAnnotation parse_annotation(std::string_view json) {
  const Json doc = parse_json(json);
  PhraseAnnotation out;
  out.phrase_id = doc.contains("phrase_id") ? field<std::string>(doc, "phrase_id") : std::string();
  for (const auto& syl : field<std::vector<Json>>(doc, "syllables")) {
    SyllableAnnotation s;
    s.segment = parse_segment(syl);
    for (const auto& ph : field<std::vector<Json>>(syl, "phonemes")) s.phonemes.push_back(parse_segment(ph));
    out.syllables.push_back(std::move(s));
  }
  validate(out);
  return out;
}

std::string annotation_to_json(const PhraseAnnotation& annotation) {
  Json doc;
  doc["phrase_id"] = annotation.phrase_id;
  doc["syllables"] = Json::array();
  for (const auto& syl : annotation.syllables) {
    Json s = segment_json(syl.segment);
    s["phonemes"] = Json::array();
    for (const auto& ph : syl.phonemes) s["phonemes"].push_back(segment_json(ph));
    doc["syllables"].push_back(std::move(s));
  }
  return doc.dump(2) + "\n";
}

OdfPair parse_odf(std::string_view json) {
  const Json doc = parse_json(json);
  const double hop = field<double>(doc, "hop_seconds");
  const double start = doc.contains("phrase_start") ? field<double>(doc, "phrase_start") : 0.0;
  return OdfPair(OnsetCurve(curve_values(doc, "syllable"), hop),
                 OnsetCurve(curve_values(doc, "phoneme"), hop), start);
}

std::string odf_to_json(const OdfPair& odfs) {
  Json doc;
  doc["hop_seconds"] = odfs.grid().hop_seconds;
  doc["phrase_start"] = odfs.phrase_start;
  doc["syllable"] = std::vector<double>(odfs.syllable.values().begin(), odfs.syllable.values().end());
  doc["phoneme"] = std::vector<double>(odfs.phoneme.values().begin(), odfs.phoneme.values().end());
  return doc.dump() + "\n";
}

EmissionMatrix parse_emissions_csv(std::string_view csv, double hop_seconds) {
  const auto lines = lines_of(csv);
  if (lines.empty()) parse_error("emission CSV is empty");
  std::vector<std::string> labels;
  for (auto cell : split(lines.front(), ',')) labels.emplace_back(trim(cell));
  std::vector<double> values;
  values.reserve((lines.size() - 1) * labels.size());
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r], ',');
    if (cells.size() != labels.size())
      parse_error("emission CSV row " + std::to_string(r) + " has " + std::to_string(cells.size()) +
                  " columns, expected " + std::to_string(labels.size()));
    for (auto cell : cells) values.push_back(parse_number(cell));
  }
  if (lines.size() < 2) parse_error("emission CSV has no frames");
  return EmissionMatrix(std::move(values), lines.size() - 1, std::move(labels), hop_seconds);
}

std::string emissions_to_csv(const EmissionMatrix& emissions) {
  std::string out;
  for (std::size_t s = 0; s < emissions.n_states(); ++s) {
    if (s > 0) out += ',';
    out += emissions.state_labels()[s];
  }
  out += '\n';
  for (std::size_t t = 0; t < emissions.n_frames(); ++t) {
    for (std::size_t s = 0; s < emissions.n_states(); ++s) {
      if (s > 0) out += ',';
      out += format_double(emissions.at(t, s));
    }
    out += '\n';
  }
  return out;
}

std::string targets_to_csv(const TrainingTargets& targets) {
  std::string out = "frame_index,syllable_label,syllable_weight,phoneme_label,phoneme_weight\n";
  const std::size_t n = targets.syllable.labels.size();
  for (std::size_t t = 0; t < n; ++t) {
    out += std::to_string(t) + ',' + std::to_string(targets.syllable.labels[t]) + ',' +
           format_double(targets.syllable.weights[t]) + ',' + std::to_string(targets.phoneme.labels[t]) +
           ',' + format_double(targets.phoneme.weights[t]) + '\n';
  }
  return out;
}

std::string report_to_json(const std::map<Level, LevelReport>& levels, std::size_t n_phrases) {
  Json doc;
  for (const auto& [level, report] : levels) {
    Json entry;
    entry["precision"] = report.precision;
    entry["recall"] = report.recall;
    entry["f1"] = report.f1;
    entry["segmentation"] = report.segmentation;
    doc[std::string(level_name(level))] = std::move(entry);
  }
  doc["n_phrases"] = n_phrases;
  doc["pooling"] = "micro";
  return doc.dump(2) + "\n";
}

SimConfig parse_sim_config(std::string_view json) {
  const Json doc = parse_json(json);
  if (!doc.is_object()) parse_error("simulation config must be a JSON object");
  SimConfig c;
  const std::set<std::string> known = {
      "seed", "n_phrases", "min_syllables", "max_syllables", "min_phonemes", "max_phonemes",
      "min_phoneme_seconds", "max_phoneme_seconds", "jitter_sigma", "hop_seconds", "peak_width_frames",
      "peak_amplitude", "noise_floor", "constant_floor", "spurious_rate", "spurious_amplitude",
      "emission_log_odds", "emission_noise"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) parse_error("unknown simulation config key '" + key + "'");
  }
  auto opt = [&](const char* key, auto& target) {
    if (doc.contains(key)) target = field<std::decay_t<decltype(target)>>(doc, key);
  };
  opt("seed", c.seed);
  opt("n_phrases", c.n_phrases);
  opt("min_syllables", c.min_syllables);
  opt("max_syllables", c.max_syllables);
  opt("min_phonemes", c.min_phonemes);
  opt("max_phonemes", c.max_phonemes);
  opt("min_phoneme_seconds", c.min_phoneme_seconds);
  opt("max_phoneme_seconds", c.max_phoneme_seconds);
  opt("jitter_sigma", c.jitter_sigma);
  opt("hop_seconds", c.hop_seconds);
  opt("peak_width_frames", c.peak_width_frames);
  opt("peak_amplitude", c.peak_amplitude);
  opt("noise_floor", c.noise_floor);
  opt("constant_floor", c.constant_floor);
  opt("spurious_rate", c.spurious_rate);
  opt("spurious_amplitude", c.spurious_amplitude);
  opt("emission_log_odds", c.emission_log_odds);
  opt("emission_noise", c.emission_noise);
  c.validate();
  return c;
}

std::string sim_config_to_json(const SimConfig& c) {
  Json doc;
  doc["seed"] = c.seed;
  doc["n_phrases"] = c.n_phrases;
  doc["min_syllables"] = c.min_syllables;
  doc["max_syllables"] = c.max_syllables;
  doc["min_phonemes"] = c.min_phonemes;
  doc["max_phonemes"] = c.max_phonemes;
  doc["min_phoneme_seconds"] = c.min_phoneme_seconds;
  doc["max_phoneme_seconds"] = c.max_phoneme_seconds;
  doc["jitter_sigma"] = c.jitter_sigma;
  doc["hop_seconds"] = c.hop_seconds;
  doc["peak_width_frames"] = c.peak_width_frames;
  doc["peak_amplitude"] = c.peak_amplitude;
  doc["noise_floor"] = c.noise_floor;
  doc["constant_floor"] = c.constant_floor;
  doc["spurious_rate"] = c.spurious_rate;
  doc["spurious_amplitude"] = c.spurious_amplitude;
  doc["emission_log_odds"] = c.emission_log_odds;
  doc["emission_noise"] = c.emission_noise;
  return doc.dump(2) + "\n";
}

}  // namespace duraseg::io

namespace duraseg::io {

std::string plot_data_csv(const OdfPair& odfs, const PhraseAnnotation& result) {
  const FrameGrid& grid = odfs.grid();
  std::vector<std::uint8_t> marks[2];
  for (Level level : {Level::kSyllable, Level::kPhoneme}) {
    auto& m = marks[level == Level::kSyllable ? 0 : 1];
    m.assign(grid.n_frames, 0);
    for (double onset : result.onsets(level)) {
      const double rel = onset - odfs.phrase_start;
      if (rel < -1e-9) throw Error(ErrorCode::kOnsetOutOfRange, "onset precedes the curve");
      const std::size_t t = grid.frame_of(std::max(rel, 0.0));
      if (t >= grid.n_frames) throw Error(ErrorCode::kOnsetOutOfRange, "onset lies beyond the curve");
      m[t] = 1;
    }
  }
  std::string out = "frame,time,syllable_odf,phoneme_odf,syllable_onset,phoneme_onset\n";
  for (std::size_t t = 0; t < grid.n_frames; ++t) {
    out += std::to_string(t) + ',' + format_double(odfs.phrase_start + grid.time_of(t)) + ',' +
           format_double(odfs.syllable.values()[t]) + ',' + format_double(odfs.phoneme.values()[t]) + ',' +
           std::to_string(marks[0][t]) + ',' + std::to_string(marks[1][t]) + '\n';
  }
  return out;
}

}  // namespace duraseg::io
