#pragma once

#include <stdexcept>
#include <string>

namespace ek {

enum class Err {
  NonPositiveDensity,
  SupersonicBaseState,
  SupersonicSpeed,
  BracketScanFailed,
  NoHomoclinicOrbit,
  QuadratureFailure,
  GridTooCoarse,
  InverseIterationStalled,
  CflViolation,
  VacuumApproached,
  GridTooSmall,
  DegenerateGamma,
  TorusTooSmall,
  MaxIterations,
  ConstraintSingular,
  RhoNonPositive,
  SpeedOutsideCurve,
  ParseError,
  ValidationError,
  BadMagic,
  TruncatedPayload,
  HeaderMismatch,
  IoError,
};

const char* err_name(Err e);

// Every failure surfaces as an Error; the CLI maps categories to exit codes
// (config 2, numerical 3, I/O 4).
class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

inline int exit_code_for(Err e) {
  switch (e) {
    case Err::ParseError:
    case Err::ValidationError:
      return 2;
    case Err::BadMagic:
    case Err::TruncatedPayload:
    case Err::HeaderMismatch:
    case Err::IoError:
      return 4;
    default:
      return 3;
  }
}

}  // namespace ek
