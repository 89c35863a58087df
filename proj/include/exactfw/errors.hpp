#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace exactfw {

enum class ErrorKind {
  Structural,
  MetricViolation,
  BrokenPseudoHermiticity,
  IllConditioned,
  SpectralGap,
  NotPositiveDefinite,
  EriksenDegenerate,
  ArcsinDomain,
  TruncationTooSmall,
  AdiabaticSignUndefined,
  Io,
  Usage,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::Structural: return "structural error";
  case ErrorKind::MetricViolation: return "metric violation";
  case ErrorKind::BrokenPseudoHermiticity: return "broken pseudo-Hermiticity";
  case ErrorKind::IllConditioned: return "ill-conditioned eigenbasis";
  case ErrorKind::SpectralGap: return "spectral gap violation";
  case ErrorKind::NotPositiveDefinite: return "not positive definite";
  case ErrorKind::EriksenDegenerate: return "eriksen denominator degenerate";
  case ErrorKind::ArcsinDomain: return "arcsin domain violation";
  case ErrorKind::TruncationTooSmall: return "truncation too small";
  case ErrorKind::AdiabaticSignUndefined: return "adiabatic sign undefined";
  case ErrorKind::Io: return "i/o error";
  case ErrorKind::Usage: return "usage error";
  }
  return "unknown error";
}

/// Short numeric rendering for error messages.
inline std::string describe(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

/// Every failure raised by the library carries a kind so that front ends
/// can map it to an exit code without parsing messages.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &detail)
      : std::runtime_error(std::string(to_string(kind)) +
                           (detail.empty() ? "" : ": " + detail)),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace exactfw
