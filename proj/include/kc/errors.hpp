#pragma once

#include <stdexcept>
#include <string>

namespace kc {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact arithmetic exceeded the configured bit-length cap.
class RationalOverflow : public Error {
 public:
  using Error::Error;
};

class InvalidDistribution : public Error {
 public:
  using Error::Error;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

/// The contract LP for the requested action is infeasible.
class NotImplementable : public Error {
 public:
  using Error::Error;
};

class NoImplementableAction : public Error {
 public:
  using Error::Error;
};

/// Every non-null choice has non-positive profit proxy, so the IOR is undefined.
class NoPositiveChoice : public Error {
 public:
  using Error::Error;
};

class InfeasibleInput : public Error {
 public:
  using Error::Error;
};

class StateSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

class InvalidPolicy : public Error {
 public:
  using Error::Error;
};

class ParameterOutOfRange : public Error {
 public:
  using Error::Error;
};

/// The moment-matching solve produced a negative probability.
class DeltaTooLarge : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace kc
