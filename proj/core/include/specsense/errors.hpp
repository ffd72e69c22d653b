#ifndef SPECSENSE_ERRORS_HPP_
#define SPECSENSE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace specsense {

// Error categories map onto CLI exit codes: usage/config -> 2, io -> 3,
// numeric -> 4.
enum class ErrorCode {
  InvalidConfig,
  Io,
  Numeric,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }
  int exit_code() const {
    switch (code_) {
      case ErrorCode::InvalidConfig: return 2;
      case ErrorCode::Io: return 3;
      case ErrorCode::Numeric: return 4;
    }
    return 1;
  }

 private:
  ErrorCode code_;
};

class InvalidConfigError : public Error {
 public:
  explicit InvalidConfigError(const std::string& what)
      : Error(ErrorCode::InvalidConfig, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ErrorCode::Numeric, what) {}
};

}  // namespace specsense

#endif  // SPECSENSE_ERRORS_HPP_
