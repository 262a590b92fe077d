// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace transrad {

// Photon energy too large for the given incident momentum: p0 - k0 <= m or
// the longitudinal radicand is non-positive.
class ChannelClosedError : public std::runtime_error {
 public:
  explicit ChannelClosedError(const std::string& what) : std::runtime_error(what) {}
};

// More than the allowed fraction of the packet is kinematically closed at
// the requested photon momentum.
class ChannelClosedOnSupportError : public std::runtime_error {
 public:
  explicit ChannelClosedOnSupportError(const std::string& what) : std::runtime_error(what) {}
};

// An approximation was requested outside its validity domain.
class RegimeViolationError : public std::runtime_error {
 public:
  explicit RegimeViolationError(const std::string& what) : std::runtime_error(what) {}
};

// N-particle separability precondition failed.
class OverlapViolationError : public std::runtime_error {
 public:
  explicit OverlapViolationError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace transrad
