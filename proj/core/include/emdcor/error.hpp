#pragma once

#include <stdexcept>
#include <string>

namespace emdcor {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A quantity is mathematically undefined for the given input, e.g. a
// correlation whose denominator vanishes because a margin is constant.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Input exceeds a documented size guard.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace emdcor
