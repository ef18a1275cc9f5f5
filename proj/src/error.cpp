#include "shiftig/error.hpp"

namespace shiftig {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InsufficientPeaks: return "InsufficientPeaks";
    case ErrorCode::InvalidPeriod: return "InvalidPeriod";
    case ErrorCode::InvalidStep: return "InvalidStep";
    case ErrorCode::InvalidSteps: return "InvalidSteps";
    case ErrorCode::NonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::NonFiniteParameter: return "NonFiniteParameter";
    case ErrorCode::DegenerateAlignment: return "DegenerateAlignment";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::NoPeaksFound: return "NoPeaksFound";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::ModelFileNotFound: return "ModelFileNotFound";
    case ErrorCode::InputFileNotFound: return "InputFileNotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownLead: return "UnknownLead";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace shiftig
