#include "atelier/error.hpp"

namespace atelier {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidKernel: return "InvalidKernel";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::DegenerateResult: return "DegenerateResult";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NoPoints: return "NoPoints";
    case ErrorCode::AllPixelsFiltered: return "AllPixelsFiltered";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::EmptyPalette: return "EmptyPalette";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::NoDetections: return "NoDetections";
    case ErrorCode::BadImage: return "BadImage";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NoCanvas: return "NoCanvas";
    case ErrorCode::DegeneratePolygon: return "DegeneratePolygon";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Timeout: return "Timeout";
  }
  return "Unknown";
}

}  // namespace atelier
