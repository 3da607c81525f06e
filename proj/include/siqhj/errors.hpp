#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace siqhj {

enum class ErrorKind {
  InvalidParameter,
  InvalidDomain,
  DomainError,
  NotBound,
  GridTooSmall,
  SingularPotential,
  NoSignChange,
  MaxIterations,
  ZeroFunction,
  NonNormalizable,
  GridTooCoarse,
  BranchPointCrossed,
  NoRoot,
  NodesTooClose,
  UnsupportedClass,
  GridMismatch,
  ConfigError
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::InvalidParameter: return "InvalidParameter";
  case ErrorKind::InvalidDomain: return "InvalidDomain";
  case ErrorKind::DomainError: return "DomainError";
  case ErrorKind::NotBound: return "NotBound";
  case ErrorKind::GridTooSmall: return "GridTooSmall";
  case ErrorKind::SingularPotential: return "SingularPotential";
  case ErrorKind::NoSignChange: return "NoSignChange";
  case ErrorKind::MaxIterations: return "MaxIterations";
  case ErrorKind::ZeroFunction: return "ZeroFunction";
  case ErrorKind::NonNormalizable: return "NonNormalizable";
  case ErrorKind::GridTooCoarse: return "GridTooCoarse";
  case ErrorKind::BranchPointCrossed: return "BranchPointCrossed";
  case ErrorKind::NoRoot: return "NoRoot";
  case ErrorKind::NodesTooClose: return "NodesTooClose";
  case ErrorKind::UnsupportedClass: return "UnsupportedClass";
  case ErrorKind::GridMismatch: return "GridMismatch";
  case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace siqhj
