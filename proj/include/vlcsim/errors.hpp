#pragma once

#include <stdexcept>
#include <string>

namespace vlcsim {

// Base for every error raised by the simulator. Callers that only care
// about "did it work" catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// TX and RX front-ends coincide, so angles and distance are undefined.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Caller broke a documented precondition (sizes disagree, empty input...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Every receive chain is blocked; there is nothing to select.
class NoLinkError : public Error {
 public:
  using Error::Error;
};

// Fewer receive chains than spatial streams.
class UnderdeterminedError : public Error {
 public:
  using Error::Error;
};

// A scene or config violates an invariant. `field` names the offender.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace vlcsim
