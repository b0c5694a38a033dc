#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ttstar {

// Failure categories; the CLI maps them onto exit codes 2, 3 and 4.
enum class ErrorKind { bad_argument, non_convergence, verification };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& what)
      : std::runtime_error(what), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

inline Error bad_argument(const std::string& code, const std::string& what) {
  return Error(ErrorKind::bad_argument, code, what);
}

inline Error non_convergence(const std::string& code, const std::string& what) {
  return Error(ErrorKind::non_convergence, code, what);
}

inline Error verification_failure(const std::string& code, const std::string& what) {
  return Error(ErrorKind::verification, code, what);
}

}  // namespace ttstar
