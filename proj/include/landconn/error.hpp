// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace landconn {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent input data (files, geometry, parameters).
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::string key)
      : DataError(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class TruncationError : public DataError {
 public:
  TruncationError(std::size_t expected, std::size_t actual)
      : DataError("grid body truncated: expected " + std::to_string(expected) +
                  " cells, found " + std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}
  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

class GeometryError : public DataError {
 public:
  using DataError::DataError;
};

// A parameter outside the mathematical domain of an operation.
class DomainError : public DataError {
 public:
  using DataError::DataError;
};

// Grids that must share a header do not.
class AlignmentError : public DataError {
 public:
  using DataError::DataError;
};

// Invalid run configuration (CLI flags or config file).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A computed result violates a module invariant.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace landconn
