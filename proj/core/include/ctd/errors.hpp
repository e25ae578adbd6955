#pragma once

#include <stdexcept>
#include <string>

namespace ctd {

enum class ErrorCode {
  DegenerateChart,
  NonFiniteInput,
  NotTangential,
  SingularResolvent,
  OutOfTube,
  InvalidDomain,
  NotKilling,
  NotInKg,
  NotInR,
  InsufficientSamples,
  RigidDegenerate,
  NoAdmissibleField,
  SingularA,
  NonPositiveValue,
  ParseError,
  ValidationError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

class ParseError : public Error {
public:
  ParseError(int line, const std::string& reason);
  int line() const { return line_; }
  const std::string& reason() const { return reason_; }

private:
  int line_;
  std::string reason_;
};

class ValidationError : public Error {
public:
  ValidationError(const std::string& key, const std::string& reason);
  const std::string& key() const { return key_; }
  const std::string& reason() const { return reason_; }

private:
  std::string key_;
  std::string reason_;
};

} // namespace ctd
