#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace baglab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A self-consistent equation has no positive root in the requested regime.
class NoRootError : public Error {
 public:
  using Error::Error;
};

// Refusal to evaluate a limit that diverges at gamma/theta = 1.
class NearThresholdError : public Error {
 public:
  using Error::Error;
};

// Internal invariant violated (should never fire).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

}  // namespace baglab
