#pragma once

#include <stdexcept>
#include <string>

namespace laminar {

enum class ErrorKind {
  ModelMismatch,
  UnknownGenerator,
  FieldMismatch,
  InvalidArgument,
  ParseError,
  LinkedPair,
  NotInvariant,
  FixedInterval,
  IndifferentPoint,
  IdentityPower,
  IndeterminateInput,
  NotPALike,
  CellsOverlap,
  PeriodicSetsNotDisjoint,
  PerNotInvariant,
  DepthTooShallow,
  ArcIsFullCircle,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::ModelMismatch: return "ModelMismatch";
    case ErrorKind::UnknownGenerator: return "UnknownGenerator";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::LinkedPair: return "LinkedPair";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::FixedInterval: return "FixedInterval";
    case ErrorKind::IndifferentPoint: return "IndifferentPoint";
    case ErrorKind::IdentityPower: return "IdentityPower";
    case ErrorKind::IndeterminateInput: return "IndeterminateInput";
    case ErrorKind::NotPALike: return "NotPALike";
    case ErrorKind::CellsOverlap: return "CellsOverlap";
    case ErrorKind::PeriodicSetsNotDisjoint: return "PeriodicSetsNotDisjoint";
    case ErrorKind::PerNotInvariant: return "PerNotInvariant";
    case ErrorKind::DepthTooShallow: return "DepthTooShallow";
    case ErrorKind::ArcIsFullCircle: return "ArcIsFullCircle";
  }
  return "Unknown";
}

// Every failure raised by the library carries a kind so callers (and the CLI)
// can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace laminar
