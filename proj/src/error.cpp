#include "gapforge/error.hpp"

#include <sstream>

namespace gapforge {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::malformed_instance: return "malformed-instance";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::resource_cap: return "resource-cap";
    case ErrorKind::infeasible: return "infeasible-parameters";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::shape_mismatch: return "shape-mismatch";
    case ErrorKind::certificate: return "certificate";
    case ErrorKind::subroutine_failure: return "subroutine-failure";
  }
  return "unknown";
}

const char* to_string(ParseFailure failure) {
  switch (failure) {
    case ParseFailure::missing_header: return "missing header";
    case ParseFailure::malformed_header: return "malformed header";
    case ParseFailure::literal_out_of_range: return "literal out of range";
    case ParseFailure::unterminated_clause: return "unterminated clause";
    case ParseFailure::clause_count_mismatch: return "clause count mismatch";
    case ParseFailure::bad_token: return "bad token";
    case ParseFailure::bad_table: return "bad truth table";
  }
  return "unknown";
}

namespace {

std::string parse_message(ParseFailure failure, std::size_t line, const std::string& detail) {
  std::ostringstream os;
  os << "line " << line << ": " << to_string(failure);
  if (!detail.empty()) os << " (" << detail << ")";
  return os.str();
}

std::string convergence_message(std::size_t iterations, double last) {
  std::ostringstream os;
  os.precision(17);
  os << "power iteration hit the cap of " << iterations
     << " iterations; last Rayleigh estimate " << last;
  return os.str();
}

}  // namespace

ParseError::ParseError(ParseFailure failure, std::size_t line, const std::string& detail)
    : Error(ErrorKind::parse_error, parse_message(failure, line, detail)),
      failure_(failure),
      line_(line) {}

ConvergenceError::ConvergenceError(std::size_t iterations, double last_estimate)
    : Error(ErrorKind::no_convergence, convergence_message(iterations, last_estimate)),
      iterations_(iterations),
      last_estimate_(last_estimate) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace gapforge
