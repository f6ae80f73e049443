#pragma once

#include <stdexcept>
#include <string>

namespace ncsattack {

/// Base of every error raised by the library. `kind()` names the error class
/// and is what the CLI prints and maps to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
  virtual int exit_code() const noexcept = 0;
};

#define NCSATTACK_DEFINE_ERROR(Name, Code)                            \
  class Name : public Error {                                         \
   public:                                                            \
    using Error::Error;                                               \
    const char* kind() const noexcept override { return #Name; }      \
    int exit_code() const noexcept override { return Code; }          \
  };

NCSATTACK_DEFINE_ERROR(InvalidInput, 2)
NCSATTACK_DEFINE_ERROR(NotFound, 3)
NCSATTACK_DEFINE_ERROR(InsufficientData, 4)
NCSATTACK_DEFINE_ERROR(DegenerateGeometry, 5)
NCSATTACK_DEFINE_ERROR(IoError, 6)

#undef NCSATTACK_DEFINE_ERROR

}  // namespace ncsattack
