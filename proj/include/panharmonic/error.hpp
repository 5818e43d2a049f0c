#pragma once

#include <stdexcept>
#include <string>

namespace panharmonic {

enum class ErrorKind {
  InvalidArgument,
  InvalidOrder,
  Overflow,
  Domain,
  UnsupportedDimension,
  InadmissibleBall,
  StencilOutsideDomain,
  TooFine,
  CoincidentPoints,
  NegativeValues,
  DegenerateCenter,
  NotPositiveType,
  DomainTooThin,
  MarginTooSmall,
  SolverBreakdown,
  StartOutside,
  AllPathsTruncated,
  Parse,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::InvalidOrder: return "invalid order";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::UnsupportedDimension: return "unsupported dimension";
    case ErrorKind::InadmissibleBall: return "inadmissible ball";
    case ErrorKind::StencilOutsideDomain: return "stencil outside domain";
    case ErrorKind::TooFine: return "mesh too fine";
    case ErrorKind::CoincidentPoints: return "coincident points";
    case ErrorKind::NegativeValues: return "negative values";
    case ErrorKind::DegenerateCenter: return "degenerate center";
    case ErrorKind::NotPositiveType: return "not panharmonic of positive type";
    case ErrorKind::DomainTooThin: return "domain too thin";
    case ErrorKind::MarginTooSmall: return "margin too small";
    case ErrorKind::SolverBreakdown: return "solver breakdown";
    case ErrorKind::StartOutside: return "start point outside";
    case ErrorKind::AllPathsTruncated: return "all paths truncated";
    case ErrorKind::Parse: return "parse error";
  }
  return "error";
}

}  // namespace panharmonic
