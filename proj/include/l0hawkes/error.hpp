#pragma once

#include <stdexcept>
#include <string>

namespace l0hawkes {

// Bad input files, malformed flags, violated preconditions on user data.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The model or an algorithm failed on otherwise valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace l0hawkes
