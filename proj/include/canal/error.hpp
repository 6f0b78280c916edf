#pragma once

#include <stdexcept>
#include <string>

namespace canal {

enum class ErrorKind {
  NullVector,
  SyntaxError,
  UnknownFunction,
  DomainError,
  OutOfDomain,
  FrameDegenerate,
  NullResidual,
  InadmissibleConfig,
  VariantViolated,
  NullConditionViolated,
  DegenerateNode,
  RankDeficient,
  SingularMetric,
  ComplexEigenvalues,
  PoleAtNode,
  DomainExit,
  UnknownExample,
  EmptySlice,
  InvalidConfig
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NullVector: return "NullVector";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownFunction: return "UnknownFunction";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::FrameDegenerate: return "FrameDegenerate";
    case ErrorKind::NullResidual: return "NullResidual";
    case ErrorKind::InadmissibleConfig: return "InadmissibleConfig";
    case ErrorKind::VariantViolated: return "VariantViolated";
    case ErrorKind::NullConditionViolated: return "NullConditionViolated";
    case ErrorKind::DegenerateNode: return "DegenerateNode";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::ComplexEigenvalues: return "ComplexEigenvalues";
    case ErrorKind::PoleAtNode: return "PoleAtNode";
    case ErrorKind::DomainExit: return "DomainExit";
    case ErrorKind::UnknownExample: return "UnknownExample";
    case ErrorKind::EmptySlice: return "EmptySlice";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "?";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind k, const std::string& msg)
      : std::runtime_error(std::string(kind_name(k)) + ": " + msg), kind_(k), msg_(msg) {}
  ErrorKind kind() const noexcept { return kind_; }
  // text without the kind prefix
  const std::string& message() const noexcept { return msg_; }

 private:
  ErrorKind kind_;
  std::string msg_;
};

// CLI exit status: 2 for anything the user can fix in the config, 3 for numeric trouble
inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::SyntaxError:
    case ErrorKind::UnknownFunction:
    case ErrorKind::InadmissibleConfig:
    case ErrorKind::VariantViolated:
    case ErrorKind::NullConditionViolated:
    case ErrorKind::UnknownExample:
    case ErrorKind::InvalidConfig:
    case ErrorKind::OutOfDomain:
    case ErrorKind::EmptySlice:
      return 2;
    default:
      return 3;
  }
}

}  // namespace canal
