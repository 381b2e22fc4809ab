#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace judgekit {

enum class ErrorKind {
  InvalidArgument,
  InvalidScale,
  Parse,
  Integrity,
  Alignment,
  UnsupportedDesign,
  MissingData,
  InsufficientData,
  DegenerateDistribution,
  UndefinedCorrelation,
  NoSignal,
};

std::string_view to_string(ErrorKind kind);

// Process exit code for a failure of this kind:
// 1 usage/parse, 2 data integrity, 3 degenerate statistics.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace judgekit
