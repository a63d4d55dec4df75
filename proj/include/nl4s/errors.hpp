#pragma once

#include <stdexcept>
#include <string>

namespace nl4s {

enum class Errc {
  InvalidArgument,
  MassCritical,
  OutOfWindow,
  UnsupportedDimension,
  BadShape,
  SingularSymbol,
  Underresolved,
  ZeroField,
  NoConvergence,
  DivergedIterate,
  NonFinite,
  InsufficientGrowth,
  CutoffTooLarge,
  ConstraintViolated,
  WindowTooLarge,
  ShiftOutOfBox,
  NoSeparation,
  PreconditionFailed,
  Io,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& what)
      : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// 2 = bad input, 3 = numerics gave up, 4 = filesystem
inline int exit_code(Errc c) {
  switch (c) {
    case Errc::Io:
      return 4;
    case Errc::NoConvergence:
    case Errc::DivergedIterate:
    case Errc::NonFinite:
    case Errc::InsufficientGrowth:
    case Errc::ConstraintViolated:
    case Errc::NoSeparation:
    case Errc::Underresolved:
      return 3;
    default:
      return 2;
  }
}

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::MassCritical: return "MassCritical";
    case Errc::OutOfWindow: return "OutOfWindow";
    case Errc::UnsupportedDimension: return "UnsupportedDimension";
    case Errc::BadShape: return "BadShape";
    case Errc::SingularSymbol: return "SingularSymbol";
    case Errc::Underresolved: return "Underresolved";
    case Errc::ZeroField: return "ZeroField";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::DivergedIterate: return "DivergedIterate";
    case Errc::NonFinite: return "NonFinite";
    case Errc::InsufficientGrowth: return "InsufficientGrowth";
    case Errc::CutoffTooLarge: return "CutoffTooLarge";
    case Errc::ConstraintViolated: return "ConstraintViolated";
    case Errc::WindowTooLarge: return "WindowTooLarge";
    case Errc::ShiftOutOfBox: return "ShiftOutOfBox";
    case Errc::NoSeparation: return "NoSeparation";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace nl4s
