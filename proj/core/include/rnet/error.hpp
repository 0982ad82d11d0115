#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rnet {

enum class ErrorKind {
  NonPositiveConductance,
  SelfLoop,
  Disconnected,
  UnknownRoot,
  UnknownVertex,
  DuplicateEdge,
  DomainMismatch,
  EmptySet,
  FullSet,
  NotInSubset,
  RootOutsideB,
  StartOutsideB,
  NotResistanceMetric,
  InvalidMetric,
  GridOutOfRange,
  DeltaTooLarge,
  AlphaOutOfRange,
  TooLargeForExact,
  TooLarge,
  InvalidArgument,
  Parse,
  Io,
  Config,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` carries the error class and
/// `what()` names the offending element.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rnet
