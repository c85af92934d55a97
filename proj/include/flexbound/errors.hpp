#pragma once

#include <stdexcept>
#include <string>

namespace flexbound {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorCode : int {
  config = 2,   // bad configuration / bad parameters
  data = 3,     // bad or inconsistent input data
  numeric = 4,  // divergence, non-finite values
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorCode::config, what) {}
};

struct DataError : Error {
  explicit DataError(const std::string& what) : Error(ErrorCode::data, what) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& what) : Error(ErrorCode::numeric, what) {}
};

}  // namespace flexbound
