#pragma once

#include <stdexcept>
#include <string>

namespace mskit {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation point coincides with a pole of a Blaschke factor.
class PoleHit : public Error {
 public:
  using Error::Error;
};

/// Requested quotient of Blaschke products does not exist.
class NotDivisible : public Error {
 public:
  using Error::Error;
};

/// A model space was requested for a degree-zero inner function.
class DegreeZero : public Error {
 public:
  using Error::Error;
};

/// Two circle functions or bases live on different grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A matrix expected to intertwine a pair of compressed shifts does not.
class NotAnIntertwiner : public Error {
 public:
  using Error::Error;
};

/// A Laurent window cannot hold the requested sections and guard band.
class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

/// Supplied symbols do not fall in the requested structure case.
class CaseMismatch : public Error {
 public:
  using Error::Error;
};

/// Unknown check identifier passed to the verification registry.
class UnknownTheorem : public Error {
 public:
  using Error::Error;
};

/// An iterative schedule exhausted its budget without stabilizing.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

}  // namespace mskit
