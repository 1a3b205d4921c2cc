#pragma once

#include <stdexcept>
#include <string>

namespace domainscope {

/// Base class for every error the toolkit raises. `kind()` distinguishes
/// input/validation problems (CLI exit 1) from backend problems (exit 2).
class Error : public std::runtime_error {
 public:
  enum class Kind { Validation, Backend };

  Error(Kind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  Kind kind() const { return kind_; }
  const std::string& code() const { return code_; }

 private:
  Kind kind_;
  std::string code_;
};

#define DOMAINSCOPE_ERROR(NAME, KIND)                              \
  class NAME : public Error {                                      \
   public:                                                         \
    explicit NAME(const std::string& message)                      \
        : Error(Error::Kind::KIND, #NAME, #NAME ": " + message) {} \
  }

DOMAINSCOPE_ERROR(MalformedHost, Validation);
DOMAINSCOPE_ERROR(DecodeError, Validation);
DOMAINSCOPE_ERROR(ParseError, Validation);
DOMAINSCOPE_ERROR(RegistryError, Validation);
DOMAINSCOPE_ERROR(IoError, Validation);
DOMAINSCOPE_ERROR(UsageError, Validation);
DOMAINSCOPE_ERROR(DuplicateEdge, Validation);
DOMAINSCOPE_ERROR(HostNotInGraph, Validation);
DOMAINSCOPE_ERROR(SingularMatrix, Validation);
DOMAINSCOPE_ERROR(MissingCorporateSnapshot, Validation);
DOMAINSCOPE_ERROR(QueryRejected, Validation);

DOMAINSCOPE_ERROR(FetcherUnavailable, Backend);
DOMAINSCOPE_ERROR(BackendUnavailable, Backend);
DOMAINSCOPE_ERROR(QuotaExhausted, Backend);

#undef DOMAINSCOPE_ERROR

}  // namespace domainscope
