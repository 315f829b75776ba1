#include "pipescope/error.hpp"

namespace pipescope {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::Disconnected: return "Disconnected";
    case Errc::DegreeTwoVertex: return "DegreeTwoVertex";
    case Errc::NonLeafX0: return "NonLeafX0";
    case Errc::NonpositiveLength: return "NonpositiveLength";
    case Errc::NonpositiveArea: return "NonpositiveArea";
    case Errc::AreaNotConstantAtLeaf: return "AreaNotConstantAtLeaf";
    case Errc::InvalidNetwork: return "InvalidNetwork";
    case Errc::UnknownVertex: return "UnknownVertex";
    case Errc::UnknownPipe: return "UnknownPipe";
    case Errc::PointIsJunction: return "PointIsJunction";
    case Errc::UnstableConfig: return "UnstableConfig";
    case Errc::MismatchedSeriesLength: return "MismatchedSeriesLength";
    case Errc::HorizonTooLarge: return "HorizonTooLarge";
    case Errc::NotPiecewiseConstant: return "NotPiecewiseConstant";
    case Errc::WindowTooLarge: return "WindowTooLarge";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::HorizonTooShort: return "HorizonTooShort";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::ActionTimeExceedsTau: return "ActionTimeExceedsTau";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace pipescope
