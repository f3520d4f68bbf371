#include "univdyn/error.hpp"

namespace univdyn {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::NotInjective: return "NotInjective";
    case ErrorCode::NormBoundViolated: return "NormBoundViolated";
    case ErrorCode::OutOfCoverage: return "OutOfCoverage";
    case ErrorCode::InsufficientInput: return "InsufficientInput";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::InvalidBranch: return "InvalidBranch";
    case ErrorCode::NoCell: return "NoCell";
    case ErrorCode::NotAntichain: return "NotAntichain";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::LipschitzRefuted: return "LipschitzRefuted";
    case ErrorCode::NetTooCoarse: return "NetTooCoarse";
    case ErrorCode::InsufficientResolution: return "InsufficientResolution";
    case ErrorCode::UnknownMember: return "UnknownMember";
    case ErrorCode::InvalidRelation: return "InvalidRelation";
    case ErrorCode::ResolutionMismatch: return "ResolutionMismatch";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::ModulusTooCoarse: return "ModulusTooCoarse";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InconsistentOracle: return "InconsistentOracle";
  }
  return "Unknown";
}

}  // namespace univdyn
