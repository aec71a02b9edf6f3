// Copyright The eigrom Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGROM_ERROR_HPP
#define EIGROM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace eigrom
{

// Base class for every failure raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// A discretization without unknowns (all vertices on the Dirichlet boundary).
class EmptySystemError : public Error
{
public:
  using Error::Error;
};

// Parameter outside the admissible set of the problem.
class AdmissibilityError : public Error
{
public:
  using Error::Error;
};

class NotPositiveDefiniteError : public Error
{
public:
  using Error::Error;
};

class DimensionError : public Error
{
public:
  using Error::Error;
};

class ConvergenceError : public Error
{
public:
  using Error::Error;
};

// Snapshot matrix with numerical rank zero.
class RankError : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

}  // namespace eigrom

#endif  // EIGROM_ERROR_HPP
