#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coopsec {

enum class Errc {
  NotHermitian,
  NotPositiveDefinite,
  DimensionMismatch,
  RankDeficient,
  NonPositiveDistance,
  InvalidConfig,
  Infeasible,
  DegenerateChannel,
  TargetUnachievable,
  MaxIterationsExceeded,
  InsufficientNodes,
  ParseError,
  UnknownKey,
  UnitError,
  IoError,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::NonPositiveDistance: return "NonPositiveDistance";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::Infeasible: return "Infeasible";
    case Errc::DegenerateChannel: return "DegenerateChannel";
    case Errc::TargetUnachievable: return "TargetUnachievable";
    case Errc::MaxIterationsExceeded: return "MaxIterationsExceeded";
    case Errc::InsufficientNodes: return "InsufficientNodes";
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::UnitError: return "UnitError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace coopsec
