// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace gemini {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cluster has (numerically) zero mass in the current assignment.
class EmptyCluster : public Error {
 public:
  explicit EmptyCluster(int cluster)
      : Error("cluster " + std::to_string(cluster) + " is empty"), cluster_(cluster) {}
  int cluster() const noexcept { return cluster_; }

 private:
  int cluster_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Transport problem with an all-zero weight vector.
class Degenerate : public Error {
 public:
  using Error::Error;
};

class NotAKernel : public Error {
 public:
  using Error::Error;
};

class NotADistance : public Error {
 public:
  using Error::Error;
};

class UnsupportedAlpha : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// NaN or Inf produced during optimisation.
class NumericError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gemini
