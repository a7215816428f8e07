#pragma once

#include <stdexcept>
#include <string>

namespace duraseg {

enum class ErrorCode {
  kBadInput,
  kIo,
  kParse,
  kAllSilence,
  kInvariantViolation,
  kInfeasiblePhrase,
  kInfeasibleSyllable,
  kInfeasibleAlignment,
  kBadPath,
  kTooLarge,
  kDegenerateSupport,
  kEmptyPhrase,
  kOnsetOutOfRange,
};

/// Exception type thrown by every engine operation. The code maps one-to-one
/// onto the C API status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for errors caused by an input that cannot be decoded under the
  /// duration constraints (as opposed to malformed input).
  bool is_infeasibility() const noexcept {
    return code_ == ErrorCode::kInfeasiblePhrase || code_ == ErrorCode::kInfeasibleSyllable ||
           code_ == ErrorCode::kInfeasibleAlignment;
  }

 private:
  ErrorCode code_;
};

/// Thrown when an inferred syllable is too short for its phonemes.
class InfeasibleSyllableError : public Error {
 public:
  InfeasibleSyllableError(std::size_t syllable_index, const std::string& what)
      : Error(ErrorCode::kInfeasibleSyllable, what), syllable_index_(syllable_index) {}

  std::size_t syllable_index() const noexcept { return syllable_index_; }

 private:
  std::size_t syllable_index_;
};

}  // namespace duraseg
