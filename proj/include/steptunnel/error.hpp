#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace steptunnel {

enum class ErrorCode {
  // potential
  NonIncreasingBreakpoints,
  LengthMismatch,
  InvalidSpec,
  EmptySamples,
  UnsortedSamples,
  ParseError,
  // pauli
  EmptyChain,
  ChainTooLong,
  NonFiniteCoefficient,
  // scattering
  DegenerateKappa,
  BothRegionsDegenerate,
  InvalidInterface,
  EvanescentLead,
  UnequalLeads,
  ChainOverflow,
  // resonance / scan
  InvalidRange,
  BadPermutation,
  IoError,
  EmptyData,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace steptunnel
