// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace vecscope {

// Root of every error the library throws. The CLI maps BackendError to exit
// code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed or schema-violating input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

// More events requested than the PMU can count at once.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Illegal RoiSession state transition.
class StateError : public Error {
 public:
  using Error::Error;
};

// Counter values that cannot come from a consistent measurement.
class DataQualityError : public Error {
 public:
  using Error::Error;
};

class BackendError : public Error {
 public:
  enum class Kind { permission, capability };

  BackendError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace vecscope
