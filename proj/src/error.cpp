#include "thickset/error.hpp"

namespace thickset {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::InvalidGamma: return "InvalidGamma";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyBand: return "EmptyBand";
    case ErrorCode::ZeroFunction: return "ZeroFunction";
    case ErrorCode::InvalidM: return "InvalidM";
    case ErrorCode::DuplicateFrequency: return "DuplicateFrequency";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::InvalidBand: return "InvalidBand";
    case ErrorCode::InvalidDegree: return "InvalidDegree";
    case ErrorCode::BandOverlap: return "BandOverlap";
    case ErrorCode::BandTooSmall: return "BandTooSmall";
    case ErrorCode::NonIntegrable: return "NonIntegrable";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace thickset
