#pragma once

#include <stdexcept>
#include <string>

namespace dpnppl {

enum class ErrorKind {
  UnboundVariable,
  UnknownVariable,
  UnknownTransition,
  UnknownPlace,
  MalformedDistribution,
  InvalidBranchWeights,
  StepNotEnabled,
  MissingValueDist,
  IllegalRun,
  InfiniteSupport,
  ParseError,
  XmlError,
  UnsupportedFeature,
  InvalidNet,
  InvalidScheduler,
  InvalidProgram,
  RejectionBudgetExhausted,
  StepBudgetExhausted,
  IoError,
};

const char* errorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(errorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace dpnppl
