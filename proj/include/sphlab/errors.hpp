#pragma once

#include <stdexcept>
#include <string>

namespace sphlab {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotSelfAdjoint : public Error {
 public:
  using Error::Error;
};

/// The Jacobi sweep cap was exceeded; signals a kernel bug, not bad input.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

class AlgebraMismatch : public Error {
 public:
  using Error::Error;
};

class BackendMismatch : public AlgebraMismatch {
 public:
  using AlgebraMismatch::AlgebraMismatch;
};

class NotPositive : public Error {
 public:
  using Error::Error;
};

class NotProjection : public Error {
 public:
  using Error::Error;
};

class ZeroProjection : public Error {
 public:
  using Error::Error;
};

class NotPositiveNormOne : public Error {
 public:
  using Error::Error;
};

class DomainViolation : public Error {
 public:
  using Error::Error;
};

class NonpositiveParameter : public Error {
 public:
  using Error::Error;
};

class ParameterOutOfRange : public Error {
 public:
  using Error::Error;
};

class NotInPositiveSphere : public Error {
 public:
  using Error::Error;
};

class GridTooFine : public Error {
 public:
  using Error::Error;
};

class NoFamilyAvailable : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sphlab
