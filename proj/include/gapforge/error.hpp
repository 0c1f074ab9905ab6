#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gapforge {

enum class ErrorKind {
  malformed_instance,
  parse_error,
  invalid_argument,
  resource_cap,
  infeasible,
  no_convergence,
  shape_mismatch,
  certificate,
  subroutine_failure,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

enum class ParseFailure {
  missing_header,
  malformed_header,
  literal_out_of_range,
  unterminated_clause,
  clause_count_mismatch,
  bad_token,
  bad_table,
};

const char* to_string(ParseFailure failure);

class ParseError : public Error {
 public:
  ParseError(ParseFailure failure, std::size_t line, const std::string& detail);
  ParseFailure failure() const noexcept { return failure_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ParseFailure failure_;
  std::size_t line_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(std::size_t iterations, double last_estimate);
  std::size_t iterations() const noexcept { return iterations_; }
  double last_estimate() const noexcept { return last_estimate_; }

 private:
  std::size_t iterations_;
  double last_estimate_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace gapforge
