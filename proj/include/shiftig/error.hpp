#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shiftig {

enum class ErrorCode {
  NonFiniteInput,
  ShapeMismatch,
  InsufficientPeaks,
  InvalidPeriod,
  InvalidStep,
  InvalidSteps,
  NonFiniteGradient,
  NonFiniteParameter,
  DegenerateAlignment,
  InvalidThreshold,
  NoPeaksFound,
  EmptyInput,
  InvalidConfig,
  InvalidModel,
  ModelFileNotFound,
  InputFileNotFound,
  ParseError,
  UnknownLead,
  IoError,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace shiftig
