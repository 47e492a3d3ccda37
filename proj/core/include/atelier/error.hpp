#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace atelier {

enum class ErrorCode {
  InvalidKernel,
  DimensionMismatch,
  EmptyMask,
  DegenerateResult,
  EmptyInput,
  NoPoints,
  AllPixelsFiltered,
  EmptyRegion,
  OutOfBounds,
  ModeMismatch,
  EmptyPalette,
  ProviderUnavailable,
  NoDetections,
  BadImage,
  TooLarge,
  NoCanvas,
  DegeneratePolygon,
  NotFound,
  BadRequest,
  InvalidConfig,
  Timeout,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// service layer can map it onto a response without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace atelier
