#include "ctd/errors.hpp"

namespace ctd {

const char* to_string(ErrorCode code)
{
  switch (code) {
  case ErrorCode::DegenerateChart: return "DegenerateChart";
  case ErrorCode::NonFiniteInput: return "NonFiniteInput";
  case ErrorCode::NotTangential: return "NotTangential";
  case ErrorCode::SingularResolvent: return "SingularResolvent";
  case ErrorCode::OutOfTube: return "OutOfTube";
  case ErrorCode::InvalidDomain: return "InvalidDomain";
  case ErrorCode::NotKilling: return "NotKilling";
  case ErrorCode::NotInKg: return "NotInKg";
  case ErrorCode::NotInR: return "NotInR";
  case ErrorCode::InsufficientSamples: return "InsufficientSamples";
  case ErrorCode::RigidDegenerate: return "RigidDegenerate";
  case ErrorCode::NoAdmissibleField: return "NoAdmissibleField";
  case ErrorCode::SingularA: return "SingularA";
  case ErrorCode::NonPositiveValue: return "NonPositiveValue";
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

ParseError::ParseError(int line, const std::string& reason)
    : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + reason),
      line_(line), reason_(reason)
{
}

ValidationError::ValidationError(const std::string& key, const std::string& reason)
    : Error(ErrorCode::ValidationError, key + ": " + reason), key_(key), reason_(reason)
{
}

} // namespace ctd
