#pragma once

#include <stdexcept>
#include <string>

namespace carnot {

/// Base class for all library errors.
class CarnotError : public std::runtime_error {
public:
  explicit CarnotError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public CarnotError {
public:
  using CarnotError::CarnotError;
};

class IndexError : public CarnotError {
public:
  using CarnotError::CarnotError;
};

class DimensionMismatch : public CarnotError {
public:
  using CarnotError::CarnotError;
};

// Algebra construction failures, one class per violated invariant so callers
// can tell exactly which check fired.
class AlgebraError : public CarnotError {
public:
  using CarnotError::CarnotError;
};

class AntisymmetryViolation : public AlgebraError {
public:
  using AlgebraError::AlgebraError;
};

class JacobiViolation : public AlgebraError {
public:
  using AlgebraError::AlgebraError;
};

class GradingViolation : public AlgebraError {
public:
  using AlgebraError::AlgebraError;
};

class StratificationError : public AlgebraError {
public:
  using AlgebraError::AlgebraError;
};

class UnknownName : public CarnotError {
public:
  using CarnotError::CarnotError;
};

class BasisMismatch : public CarnotError {
public:
  using CarnotError::CarnotError;
};

class DegreeMismatch : public CarnotError {
public:
  using CarnotError::CarnotError;
};

/// Operation was asked for on a commutative group where the construction
/// requires step >= 2.
class CommutativeGroupError : public CarnotError {
public:
  using CarnotError::CarnotError;
};

/// A condition that should be impossible for validated inputs.
class InternalError : public CarnotError {
public:
  using CarnotError::CarnotError;
};

} // namespace carnot
