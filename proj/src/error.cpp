#include "dpnppl/error.hpp"

namespace dpnppl {

const char* errorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::UnknownTransition: return "UnknownTransition";
    case ErrorKind::UnknownPlace: return "UnknownPlace";
    case ErrorKind::MalformedDistribution: return "MalformedDistribution";
    case ErrorKind::InvalidBranchWeights: return "InvalidBranchWeights";
    case ErrorKind::StepNotEnabled: return "StepNotEnabled";
    case ErrorKind::MissingValueDist: return "MissingValueDist";
    case ErrorKind::IllegalRun: return "IllegalRun";
    case ErrorKind::InfiniteSupport: return "InfiniteSupport";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::XmlError: return "XmlError";
    case ErrorKind::UnsupportedFeature: return "UnsupportedFeature";
    case ErrorKind::InvalidNet: return "InvalidNet";
    case ErrorKind::InvalidScheduler: return "InvalidScheduler";
    case ErrorKind::InvalidProgram: return "InvalidProgram";
    case ErrorKind::RejectionBudgetExhausted: return "RejectionBudgetExhausted";
    case ErrorKind::StepBudgetExhausted: return "StepBudgetExhausted";
    case ErrorKind::IoError: return "IoError";
  }
  return "Error";
}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace dpnppl
