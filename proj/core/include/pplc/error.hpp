// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace pplc {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Raised during evaluation: type-incompatible intrinsic arguments, trace
// underrun, non-boolean conditions and so on. `label` names the let-binding
// (or variable) being evaluated when the error occurred, if known.
class DynamicError : public Error {
 public:
  explicit DynamicError(const std::string& message, std::string label = {})
      : Error(label.empty() ? message : message + " (at " + label + ")"),
        message_(message),
        label_(std::move(label)) {}

  const std::string& message() const { return message_; }
  const std::string& label() const { return label_; }

  DynamicError with_label(const std::string& label) const {
    return DynamicError(message_, label);
  }

 private:
  std::string message_;
  std::string label_;
};

// An internal consistency check failed (solver bound exceeded, a solved
// constraint set that does not validate, ...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// The set of CPS-selected labels violates callee uniformity.
class MalformedVars : public Error {
 public:
  using Error::Error;
};

class InferenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace pplc
