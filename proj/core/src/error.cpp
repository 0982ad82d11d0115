#include "rnet/error.hpp"

namespace rnet {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveConductance: return "NonPositiveConductance";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::UnknownRoot: return "UnknownRoot";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::FullSet: return "FullSet";
    case ErrorKind::NotInSubset: return "NotInSubset";
    case ErrorKind::RootOutsideB: return "RootOutsideB";
    case ErrorKind::StartOutsideB: return "StartOutsideB";
    case ErrorKind::NotResistanceMetric: return "NotResistanceMetric";
    case ErrorKind::InvalidMetric: return "InvalidMetric";
    case ErrorKind::GridOutOfRange: return "GridOutOfRange";
    case ErrorKind::DeltaTooLarge: return "DeltaTooLarge";
    case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorKind::TooLargeForExact: return "TooLargeForExact";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::Config: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace rnet
