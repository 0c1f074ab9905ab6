#include "gapforge/csp/io.hpp"

#include <charconv>
#include <optional>
#include <sstream>

#include "gapforge/error.hpp"

namespace gapforge::csp {

namespace {

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 1;
  while (!text.empty()) {
    auto end = text.find('\n');
    auto piece = text.substr(0, end);
    if (!piece.empty() && piece.back() == '\r') piece.remove_suffix(1);
    lines.push_back({number++, piece});
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
  return lines;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool is_comment(const std::vector<std::string_view>& toks) {
  return !toks.empty() && toks.front().front() == 'c';
}

template <class T>
std::optional<T> to_number(std::string_view tok) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
  return value;
}

}  // namespace

CspInstance parse_dimacs(std::string_view text) {
  std::optional<std::size_t> vars;
  std::size_t declared = 0;
  std::size_t last_line = 1;
  std::size_t pending_line = 0;
  std::vector<Clause> clauses;
  std::vector<Literal> pending;
  for (const auto& line : split_lines(text)) {
    auto toks = tokens(line.text);
    if (toks.empty() || is_comment(toks)) continue;
    if (toks.front() == "%") break;
    last_line = line.number;
    if (!vars) {
      if (toks.front() != "p") {
        throw ParseError(ParseFailure::missing_header, line.number, "expected 'p cnf <vars> <clauses>'");
      }
      auto n = toks.size() == 4 ? to_number<std::size_t>(toks[2]) : std::nullopt;
      auto m = toks.size() == 4 ? to_number<std::size_t>(toks[3]) : std::nullopt;
      if (toks.size() != 4 || toks[1] != "cnf" || !n || !m) {
        throw ParseError(ParseFailure::malformed_header, line.number, std::string(line.text));
      }
      vars = *n;
      declared = *m;
      continue;
    }
    if (toks.front() == "p") {
      throw ParseError(ParseFailure::malformed_header, line.number, "repeated header");
    }
    for (auto tok : toks) {
      auto lit = to_number<long long>(tok);
      if (!lit) throw ParseError(ParseFailure::bad_token, line.number, std::string(tok));
      if (*lit == 0) {
        clauses.push_back(Clause::disjunction(pending));
        pending.clear();
        continue;
      }
      auto var = static_cast<std::size_t>(*lit < 0 ? -*lit : *lit);
      if (var > *vars) {
        throw ParseError(ParseFailure::literal_out_of_range, line.number,
                         "literal " + std::string(tok) + " exceeds " + std::to_string(*vars) +
                             " declared variables");
      }
      pending.push_back({var - 1, *lit < 0});
      pending_line = line.number;
    }
  }
  if (!vars) throw ParseError(ParseFailure::missing_header, last_line, "no 'p cnf' line");
  if (!pending.empty()) {
    throw ParseError(ParseFailure::unterminated_clause, pending_line, "missing terminating 0");
  }
  if (clauses.size() != declared) {
    throw ParseError(ParseFailure::clause_count_mismatch, last_line,
                     "header declares " + std::to_string(declared) + " clauses, found " +
                         std::to_string(clauses.size()));
  }
  return CspInstance(*vars, std::move(clauses));
}

std::string table_to_hex(std::span<const std::uint8_t> table) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::size_t digits = table.size() <= 4 ? 1 : table.size() / 4;
  std::string out(digits, '0');
  for (std::size_t d = 0; d < digits; ++d) {
    unsigned value = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      std::size_t i = 4 * d + b;
      if (i < table.size() && table[i]) value |= 1U << b;
    }
    out[digits - 1 - d] = kDigits[value];
  }
  return out;
}

std::vector<std::uint8_t> table_from_hex(std::string_view hex, std::size_t arity) {
  require(arity <= kMaxArity, ErrorKind::resource_cap, "arity too large");
  std::size_t size = std::size_t{1} << arity;
  std::size_t digits = size <= 4 ? 1 : size / 4;
  if (hex.size() != digits) {
    fail(ErrorKind::parse_error, "expected " + std::to_string(digits) + " hex digits");
  }
  std::vector<std::uint8_t> table(size, 0);
  for (std::size_t d = 0; d < digits; ++d) {
    char ch = hex[digits - 1 - d];
    unsigned value = 0;
    if (ch >= '0' && ch <= '9') {
      value = static_cast<unsigned>(ch - '0');
    } else if (ch >= 'a' && ch <= 'f') {
      value = static_cast<unsigned>(ch - 'a' + 10);
    } else if (ch >= 'A' && ch <= 'F') {
      value = static_cast<unsigned>(ch - 'A' + 10);
    } else {
      fail(ErrorKind::parse_error, "non-hex digit in truth table");
    }
    for (std::size_t b = 0; b < 4; ++b) {
      if (!((value >> b) & 1U)) continue;
      std::size_t i = 4 * d + b;
      if (i >= size) fail(ErrorKind::parse_error, "truth table has bits beyond 2^arity");
      table[i] = 1;
    }
  }
  return table;
}

CspInstance parse_native(std::string_view text) {
  std::optional<std::size_t> vars;
  std::size_t declared = 0;
  std::size_t width = 0;
  std::size_t last_line = 1;
  std::vector<Clause> clauses;
  for (const auto& line : split_lines(text)) {
    auto toks = tokens(line.text);
    if (toks.empty() || is_comment(toks)) continue;
    last_line = line.number;
    if (!vars) {
      if (toks.front() != "gcsp") {
        throw ParseError(ParseFailure::missing_header, line.number, "expected 'gcsp <n> <m> <width>'");
      }
      auto n = toks.size() == 4 ? to_number<std::size_t>(toks[1]) : std::nullopt;
      auto m = toks.size() == 4 ? to_number<std::size_t>(toks[2]) : std::nullopt;
      auto w = toks.size() == 4 ? to_number<std::size_t>(toks[3]) : std::nullopt;
      if (!n || !m || !w) throw ParseError(ParseFailure::malformed_header, line.number, std::string(line.text));
      vars = *n;
      declared = *m;
      width = *w;
      continue;
    }
    auto arity = to_number<std::size_t>(toks.front());
    if (!arity) throw ParseError(ParseFailure::bad_token, line.number, std::string(toks.front()));
    if (*arity > width) {
      throw ParseError(ParseFailure::bad_token, line.number, "arity exceeds declared width");
    }
    if (toks.size() != *arity + 2) {
      throw ParseError(ParseFailure::bad_token, line.number,
                       "expected arity, " + std::to_string(*arity) + " variables and a table");
    }
    std::vector<std::size_t> scope;
    for (std::size_t k = 0; k < *arity; ++k) {
      auto v = to_number<std::size_t>(toks[1 + k]);
      if (!v) throw ParseError(ParseFailure::bad_token, line.number, std::string(toks[1 + k]));
      if (*v >= *vars) {
        throw ParseError(ParseFailure::literal_out_of_range, line.number,
                         "variable " + std::to_string(*v) + " not below " + std::to_string(*vars));
      }
      scope.push_back(*v);
    }
    try {
      clauses.emplace_back(std::move(scope), table_from_hex(toks.back(), *arity));
    } catch (const Error& e) {
      throw ParseError(ParseFailure::bad_table, line.number, e.what());
    }
  }
  if (!vars) throw ParseError(ParseFailure::missing_header, last_line, "no 'gcsp' line");
  if (clauses.size() != declared) {
    throw ParseError(ParseFailure::clause_count_mismatch, last_line,
                     "header declares " + std::to_string(declared) + " clauses, found " +
                         std::to_string(clauses.size()));
  }
  return CspInstance(*vars, std::move(clauses));
}

CspInstance parse_instance(std::string_view text) {
  for (const auto& line : split_lines(text)) {
    auto toks = tokens(line.text);
    if (toks.empty() || is_comment(toks)) continue;
    if (toks.front() == "p") return parse_dimacs(text);
    if (toks.front() == "gcsp") return parse_native(text);
    throw ParseError(ParseFailure::missing_header, line.number, "expected 'p cnf' or 'gcsp'");
  }
  throw ParseError(ParseFailure::missing_header, 1, "empty input");
}

std::string serialize_dimacs(const CspInstance& inst) {
  std::ostringstream os;
  os << "p cnf " << inst.num_vars() << ' ' << inst.clause_count() << '\n';
  for (const auto& c : inst.clauses()) {
    auto lits = c.literals();
    require(lits.has_value(), ErrorKind::invalid_argument, "DIMACS needs disjunctive clauses");
    for (const auto& l : *lits) {
      os << (l.negated ? "-" : "") << (l.var + 1) << ' ';
    }
    os << "0\n";
  }
  return os.str();
}

std::string serialize_native(const CspInstance& inst) {
  std::ostringstream os;
  os << "gcsp " << inst.num_vars() << ' ' << inst.clause_count() << ' ' << inst.width() << '\n';
  for (const auto& c : inst.clauses()) {
    os << c.arity();
    for (auto v : c.scope()) os << ' ' << v;
    os << ' ' << table_to_hex(c.table()) << '\n';
  }
  return os.str();
}

std::string serialize(const CspInstance& inst) {
  return inst.is_3sat() ? serialize_dimacs(inst) : serialize_native(inst);
}

}  // namespace gapforge::csp
