#include "judgekit/error.hpp"

namespace judgekit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InvalidScale: return "invalid-scale";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Integrity: return "integrity";
    case ErrorKind::Alignment: return "alignment";
    case ErrorKind::UnsupportedDesign: return "unsupported-design";
    case ErrorKind::MissingData: return "missing-data";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::DegenerateDistribution: return "degenerate-distribution";
    case ErrorKind::UndefinedCorrelation: return "undefined-correlation";
    case ErrorKind::NoSignal: return "no-signal";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidScale:
    case ErrorKind::Parse:
    case ErrorKind::UnsupportedDesign:
      return 1;
    case ErrorKind::Integrity:
    case ErrorKind::Alignment:
    case ErrorKind::MissingData:
      return 2;
    case ErrorKind::InsufficientData:
    case ErrorKind::DegenerateDistribution:
    case ErrorKind::UndefinedCorrelation:
    case ErrorKind::NoSignal:
      return 3;
  }
  return 1;
}

}  // namespace judgekit
