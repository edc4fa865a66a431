#pragma once

#include <stdexcept>
#include <string>

namespace fraclane {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid problem data or operation arguments.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// lambda is not below the first Dirichlet eigenvalue, so the energy is not coercive.
class CoercivityError : public Error {
 public:
  CoercivityError(double lambda, double lambda1);
  double lambda;
  double lambda1;
};

/// An iterative solver stopped without meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual);
  int iterations;
  double residual;
};

}  // namespace fraclane
