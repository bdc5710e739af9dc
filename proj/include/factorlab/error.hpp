#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace factorlab {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedDescriptor : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class NotAMember : public Error {
 public:
  using Error::Error;
};

class TableMismatch : public Error {
 public:
  TableMismatch() : Error("factorizations refer to different atom tables") {}
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(std::size_t limit)
      : Error("factorization budget exceeded (limit " + std::to_string(limit) +
              ")"),
        limit_(limit) {}

  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t limit_;
};

// Raised by the worked-example verifiers when a checked identity fails.
class AssertionFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace factorlab
