// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace gdrae {

// Operand dimensions disagree. The message carries both shapes.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An argument lies outside the mathematical domain of the operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// NaN or otherwise unusable numeric input.
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An object is used in a state that does not support the call, e.g.
// backward without a completed forward pass.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class BatchTooSmallError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Adam refused to apply a step because a gradient entry was not finite.
class NonFiniteGradientError : public std::runtime_error {
 public:
  NonFiniteGradientError(const std::string& path)
      : std::runtime_error("non-finite gradient in parameter '" + path + "'"),
        path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class TrainingDivergedError : public std::runtime_error {
 public:
  TrainingDivergedError(int epoch)
      : std::runtime_error("training diverged (non-finite loss) in epoch " +
                           std::to_string(epoch)),
        epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

// Model file is not syntactically well formed.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Model file parses but its contents contradict its header.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gdrae
