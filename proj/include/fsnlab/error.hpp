#pragma once

#include <stdexcept>
#include <string>

namespace fsnlab {

// Categories map one-to-one onto CLI exit codes (see tools/fsnlab.cpp).
enum class ErrorKind {
  invalid_input = 3,   // malformed file, bad ids, violated model invariants
  precondition = 4,    // numerical precondition (disconnected, repeated eigenvalue, ...)
  non_termination = 5  // iteration or round cap exhausted
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace fsnlab
