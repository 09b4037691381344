#pragma once

#include <stdexcept>
#include <string>

namespace dissiplab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the admissible set (rho <= 0, theta <= 0, empty box, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A product with the symmetrizer came out non-symmetric; indicates an assembly bug.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// Non-real characteristic speeds or a non-positive discriminant.
class HyperbolicityError : public Error {
 public:
  using Error::Error;
};

/// Repeated generalized eigenvalue; individual eigenvectors are not determined.
class DegenerateEigenbasisError : public Error {
 public:
  using Error::Error;
};

class NotEquilibriumError : public Error {
 public:
  using Error::Error;
};

/// Viscous construction requested for a system with nu = 0.
class InviscidError : public Error {
 public:
  using Error::Error;
};

/// Relaxation construction requested for a system with nu != 0.
class ViscousError : public Error {
 public:
  using Error::Error;
};

class DeltaTooLargeError : public Error {
 public:
  using Error::Error;
};

class NoDeltaFoundError : public Error {
 public:
  using Error::Error;
};

class DeltaRangeError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dissiplab
