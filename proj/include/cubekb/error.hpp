#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cubekb {

// Every failure the library reports is an Error carrying one of these codes.
enum class Errc {
  // cube-core
  WrongLength,
  InvalidCharacter,
  CountViolation,
  CenterViolation,
  UnrecognizedCubie,
  BadToken,
  TwistViolation,
  FlipViolation,
  ParityViolation,
  // coord-tables
  NotInSubgroup,
  // solvers
  Unsolvable,
  TimeBudgetExhausted,
  InvalidBudget,
  // metrics
  NotASolution,
  EmptySample,
  IOFailure,
  // plan-compiler
  MalformedPlan,
  // motion-planner
  NoTargetVoxel,
  GeometryMismatch,
  NoProgress,
  OutOfBounds,
  NonMonotonicTime,
  InfeasibleTiming,
  InvalidArgument,
  // scene-sim
  LayerUnreachable,
  // config / files
  ParseError,
  CorruptFile,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace cubekb
