#ifndef RCD_ERRORS_HPP
#define RCD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rcd {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ill-formed call: bad sizes, empty sequences, out-of-range indices.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Numeric-domain failure: non-finite inputs, failed eigen iterations,
/// non-positive pivots.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A structural requirement of the detection setup does not hold
/// (pole/zero layout, graph connectivity, weight-matrix spectrum).
class AssumptionViolation : public Error {
 public:
  enum class Kind {
    ZeroPoleCancellation,
    RepeatedPole,
    NotStrictlyProper,
    NonUniqueDominantPole,
    UnstablePole,
    DisconnectedGraph,
    WeightSpectrum,
  };

  AssumptionViolation(Kind kind, const std::string& what)
      : Error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Random generation gave up (e.g. connectivity retry cap exceeded).
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Config file could not be parsed; message carries location context.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace rcd

#endif  // RCD_ERRORS_HPP
