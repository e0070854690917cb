#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lpm {

enum class Errc {
  NegativeProbability,
  SumNotOne,
  DuplicateDegree,
  DegreeZero,
  DegreeExceedsM,
  NonIntegralSplit,
  MeanMismatch,
  InvalidGraph,
  NoMatchingExists,
  InstanceTooLarge,
  PreconditionViolated,
  ParseError,
  UnknownKey,
  InvalidValue,
};

std::string_view to_string(Errc code) noexcept;

/// Domain error raised by every lpmatch operation. The code is stable and
/// is what callers (the CLI, the Python bindings) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lpm
