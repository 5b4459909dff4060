#include "errinvar/error.hpp"

namespace errinvar {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::InvalidBandwidth: return "InvalidBandwidth";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NoValidBandwidth: return "NoValidBandwidth";
    case ErrorCode::IllPosedDeconvolution: return "IllPosedDeconvolution";
    case ErrorCode::DegenerateDensity: return "DegenerateDensity";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::BandwidthSearchFailed: return "BandwidthSearchFailed";
    case ErrorCode::MissingReplicates: return "MissingReplicates";
    case ErrorCode::DegenerateQuadratic: return "DegenerateQuadratic";
    case ErrorCode::DataFormatError: return "DataFormatError";
  }
  return "Unknown";
}

bool is_data_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InsufficientData:
    case ErrorCode::DegenerateData:
    case ErrorCode::MissingReplicates:
    case ErrorCode::DataFormatError:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace errinvar
