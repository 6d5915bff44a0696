#include "steptunnel/error.hpp"

namespace steptunnel {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonIncreasingBreakpoints: return "NonIncreasingBreakpoints";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::EmptySamples: return "EmptySamples";
    case ErrorCode::UnsortedSamples: return "UnsortedSamples";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyChain: return "EmptyChain";
    case ErrorCode::ChainTooLong: return "ChainTooLong";
    case ErrorCode::NonFiniteCoefficient: return "NonFiniteCoefficient";
    case ErrorCode::DegenerateKappa: return "DegenerateKappa";
    case ErrorCode::BothRegionsDegenerate: return "BothRegionsDegenerate";
    case ErrorCode::InvalidInterface: return "InvalidInterface";
    case ErrorCode::EvanescentLead: return "EvanescentLead";
    case ErrorCode::UnequalLeads: return "UnequalLeads";
    case ErrorCode::ChainOverflow: return "ChainOverflow";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::BadPermutation: return "BadPermutation";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyData: return "EmptyData";
  }
  return "Unknown";
}

}  // namespace steptunnel
