#pragma once

#include <stdexcept>
#include <string>

namespace singosc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument sits on (or numerically at) a pole of Γ, ψ or f_P.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// A hypergeometric parameter b is at a non-positive integer (M) or an integer (U).
class ParameterPole : public Error {
 public:
  using Error::Error;
};

/// Argument outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// 2mV0 >= (l+1/2)^2: the spectrum is unbounded below and nothing is solved.
class FallToCenterError : public Error {
 public:
  using Error::Error;
};

class RegimeError : public Error {
 public:
  using Error::Error;
};

/// A finite value was required but the extension parameter is the point at infinity.
class InfiniteTau : public Error {
 public:
  using Error::Error;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

class FloorError : public Error {
 public:
  using Error::Error;
};

/// Closed-form normalization requested on a pure standard/additional state.
class DegenerateBranch : public Error {
 public:
  using Error::Error;
};

/// Numerov grid too coarse for the local wavelength.
class StepError : public Error {
 public:
  using Error::Error;
};

class NoSignChange : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace singosc
