#pragma once

#include <stdexcept>
#include <string>

namespace vtl {

/// Process exit codes shared by the library's error types and the CLI.
enum class ExitCode : int {
  success = 0,
  input = 2,
  class_violation = 3,
  construction = 4,
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual ExitCode exit_code() const noexcept { return ExitCode::input; }
};

/// Malformed files, bad flags, inconsistent grids.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its domain (wrong level, empty cube list, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// An exponent does not belong to the class an operation requires.
class ClassViolation : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::class_violation; }
};

/// A numerical construction could not be completed.
class ConstructionError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::construction; }
};

class ResolutionError : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

/// A contract that should hold by construction was observed to fail.
class InvariantFailure : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::construction; }
};

}  // namespace vtl
