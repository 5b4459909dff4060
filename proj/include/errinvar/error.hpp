#pragma once

#include <stdexcept>
#include <string>

namespace errinvar {

enum class ErrorCode {
  InvalidParameter,
  UnsupportedOrder,
  GridMismatch,
  InvalidBandwidth,
  InsufficientData,
  NoValidBandwidth,
  IllPosedDeconvolution,
  DegenerateDensity,
  DegenerateData,
  BandwidthSearchFailed,
  MissingReplicates,
  DegenerateQuadratic,
  DataFormatError,
};

const char* to_string(ErrorCode code) noexcept;

// Data-related codes map to CLI exit status 3, everything else to 4.
bool is_data_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace errinvar
