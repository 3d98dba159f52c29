#include "iwalab/errors.hpp"

namespace iwalab {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::PrecisionTooLow: return "PrecisionTooLow";
    case ErrorCode::ZeroSeries: return "ZeroSeries";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::BadIndices: return "BadIndices";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::NotFiniteDegree: return "NotFiniteDegree";
    case ErrorCode::PrecisionInconclusive: return "PrecisionInconclusive";
    case ErrorCode::NotTorsion: return "NotTorsion";
    case ErrorCode::SameLine: return "SameLine";
    case ErrorCode::ZeroModule: return "ZeroModule";
    case ErrorCode::FitUnstable: return "FitUnstable";
    case ErrorCode::MalformedKodaira: return "MalformedKodaira";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::InputError: return "InputError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace iwalab
