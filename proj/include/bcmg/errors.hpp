#pragma once

#include <stdexcept>
#include <string>

namespace bcmg {

/// Base class of every error raised by the solver library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ghost stencil leaves the box or touches an inactive node: the grid is too coarse.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// No root of the projection equation could be found for a ghost point.
class ProjectionError : public Error {
 public:
  using Error::Error;
};

class DegenerateGradientError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a mathematical function (e.g. arccosh of z < 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A coarse restriction stencil has no admissible fine node.
class EmptyStencil : public Error {
 public:
  using Error::Error;
};

class AllZeroSlopes : public Error {
 public:
  using Error::Error;
};

class CoarseSolveError : public Error {
 public:
  using Error::Error;
};

class DivergenceDetected : public Error {
 public:
  using Error::Error;
};

}  // namespace bcmg
