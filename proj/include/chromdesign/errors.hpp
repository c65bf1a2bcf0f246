#pragma once

#include <stdexcept>
#include <string>

namespace chromdesign {

// Parameter or input shape rejected before any work is done.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameters are valid in principle but outside what is implemented.
class UnsupportedSize : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A vector was expected to be constant on a symmetry class and was not.
class ShapeViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Search hit its point cap, node budget or time budget. For colouring the
// best bounds known at that moment are carried along.
class ResourceExhausted : public std::runtime_error {
 public:
  ResourceExhausted(const std::string& what, int lower = 0, int upper = 0)
      : std::runtime_error(what), lower_bound(lower), upper_bound(upper) {}

  int lower_bound;
  int upper_bound;
};

}  // namespace chromdesign
