#pragma once

#include <stdexcept>
#include <string>

namespace oscloc {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (JSON or CSV). Message carries field/line context.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A numerical precondition failed (singular block, insufficient excitation, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Parameter extraction produced a non-physical value for some generator.
class IdentificationError : public NumericalError {
 public:
  IdentificationError(int bus_id, const std::string& what)
      : NumericalError("identification failed at bus " + std::to_string(bus_id) + ": " + what),
        bus_id_(bus_id) {}

  int bus_id() const noexcept { return bus_id_; }

 private:
  int bus_id_;
};

}  // namespace oscloc
