#pragma once

#include <stdexcept>
#include <string>

namespace matradix {

enum class ErrorKind {
  // configuration / input parsing
  InvalidConfig,
  ParseError,
  // domain errors
  NotExpansive,
  BorderlineSpectrum,
  WrongDigitCount,
  IncompleteDigitSet,
  NotFinitelyRepresentable,
  SingularComposition,
  CycleNotSimple,
  PeriodNotCompanion,
  NoSlotMatch,
  CountMismatch,
  NotHadamard,
  DegenerateDigitSpan,
  InvariantSubspacePresent,
  WordTooShort,
  DimensionMismatch,
  // the computation ran out of budget before deciding
  MembershipUndecided,
  // a point handed to the symbolic dynamics lies outside X(B, D)
  OutsideAttractor,
};

const char* to_string(ErrorKind kind);

// Process exit code used by the command line front end for each error class:
// 2 configuration, 3 domain error, 4 undecided.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace matradix
