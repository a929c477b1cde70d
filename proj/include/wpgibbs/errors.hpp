#pragma once

#include <stdexcept>
#include <string>

namespace wpgibbs {

// Raised when an enumeration or ball generation would exceed its configured cap.
class resource_cap_error : public std::runtime_error {
 public:
  explicit resource_cap_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a numerical post-condition (residual, remainder) fails.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wpgibbs
