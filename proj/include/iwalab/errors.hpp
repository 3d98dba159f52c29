#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iwalab {

enum class ErrorCode {
  NotAUnit,
  PrecisionTooLow,
  ZeroSeries,
  TruncationTooSmall,
  BadIndices,
  NotCoprime,
  NotFiniteDegree,
  PrecisionInconclusive,
  NotTorsion,
  SameLine,
  ZeroModule,
  FitUnstable,
  MalformedKodaira,
  MissingField,
  InputError,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace iwalab
