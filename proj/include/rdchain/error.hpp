#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rdchain {

enum class ErrorKind {
  InvalidDistribution,
  InvalidSpace,
  SizeLimit,
  UnknownPoint,
  GridTooNarrow,
  InvalidType,
  InfiniteKl,
  UnsupportedBeta,
  InvalidTruth,
  InvalidDesign,
  UnsupportedGrowth,
  Diverged,
  InsufficientGrid,
  InvalidArgument,
};

inline std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (and the CLI)
/// can branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::InvalidSpace: return "InvalidSpace";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::UnknownPoint: return "UnknownPoint";
    case ErrorKind::GridTooNarrow: return "GridTooNarrow";
    case ErrorKind::InvalidType: return "InvalidType";
    case ErrorKind::InfiniteKl: return "InfiniteKl";
    case ErrorKind::UnsupportedBeta: return "UnsupportedBeta";
    case ErrorKind::InvalidTruth: return "InvalidTruth";
    case ErrorKind::InvalidDesign: return "InvalidDesign";
    case ErrorKind::UnsupportedGrowth: return "UnsupportedGrowth";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::InsufficientGrid: return "InsufficientGrid";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace rdchain
