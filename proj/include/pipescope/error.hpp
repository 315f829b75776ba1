#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pipescope {

enum class Errc {
  // network validation
  CycleDetected,
  Disconnected,
  DegreeTwoVertex,
  NonLeafX0,
  NonpositiveLength,
  NonpositiveArea,
  AreaNotConstantAtLeaf,
  InvalidNetwork,
  UnknownVertex,
  UnknownPipe,
  // geometry
  PointIsJunction,
  // forward simulation
  UnstableConfig,
  MismatchedSeriesLength,
  // impulse-response kit
  HorizonTooLarge,
  NotPiecewiseConstant,
  WindowTooLarge,
  OutOfRange,
  // inversion
  HorizonTooShort,
  GridMismatch,
  ActionTimeExceedsTau,
  SingularSystem,
  TooFewPoints,
  // i/o
  ParseError,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

}  // namespace pipescope
