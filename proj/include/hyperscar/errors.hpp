// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace hyperscar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request exceeds a size or memory limit (sector too large, dense budget, ...).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An object is not in the state an operation requires (e.g. missing embedding).
class StateError : public Error {
 public:
  using Error::Error;
};

/// Numerical integration or factorization did not converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Some qubit-coupler detuning is not larger than the coupling.
class DispersiveRegimeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The coupling graph lacks the symmetry that was asked for.
class SymmetryAbsentError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hyperscar
