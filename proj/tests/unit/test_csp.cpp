#include <doctest.h>

#include <array>

#include "gapforge/csp/generate.hpp"
#include "gapforge/csp/instance.hpp"
#include "gapforge/csp/io.hpp"
#include "gapforge/csp/three_sat.hpp"
#include "gapforge/error.hpp"
#include "support.hpp"

using namespace gapforge;
using namespace gapforge::csp;

namespace {

Clause disj(std::initializer_list<Literal> lits) { return Clause::disjunction(std::vector<Literal>(lits)); }

Assignment bits(const char* text) { return BitString::from_string(text); }

bool satisfiable(const CspInstance& inst) { return support::naive_optimum(inst) == 1; }

}  // namespace

TEST_CASE("disjunction clauses evaluate by their literals") {
  auto c = disj({{0, false}, {1, false}, {2, false}});
  CHECK(evaluate_clause(c, bits("100")));
  auto neg = disj({{0, true}, {1, true}, {2, true}});
  CHECK_FALSE(evaluate_clause(neg, bits("111")));
  CHECK(c.falsifying_rows() == 1);
  REQUIRE(neg.literals());
  CHECK(neg.literals()->size() == 3);
}

TEST_CASE("first scope variable is the high bit of the table index") {
  std::vector<std::uint8_t> table(8, 0);
  table[3] = 1;
  Clause c({0, 1, 2}, table);
  CHECK(evaluate_clause(c, bits("011")));
  CHECK_FALSE(evaluate_clause(c, bits("110")));
  Clause swapped({2, 1, 0}, table);
  CHECK(evaluate_clause(swapped, bits("110")));
}

TEST_CASE("complementary literals make a tautology") {
  auto c = disj({{0, false}, {0, true}});
  CHECK(c.falsifying_rows() == 0);
  CHECK_FALSE(c.literals());
}

TEST_CASE("satisfied fraction") {
  SUBCASE("empty instance is degenerate with value one") {
    CspInstance inst(3, {});
    auto f = satisfied_fraction(inst, bits("000"));
    CHECK(f.degenerate);
    CHECK(f.value == 1);
  }
  SUBCASE("three of four") {
    CspInstance inst(2, {disj({{0, false}}), disj({{1, false}}), disj({{0, true}, {1, false}}), disj({{0, true}})});
    auto f = satisfied_fraction(inst, bits("11"));
    CHECK(f.value == Rational(3, 4));
    CHECK(f.satisfied == 3);
  }
  SUBCASE("sign-pattern block tops out at seven eighths") {
    std::array<std::array<std::size_t, 3>, 1> triple{{{0, 1, 2}}};
    auto inst = sign_pattern_blocks(3, triple);
    CHECK(inst.clause_count() == 8);
    CHECK(support::naive_optimum(inst) == Rational(7, 8));
    for (std::uint64_t x = 0; x < 8; ++x) CHECK(satisfied_fraction(inst, BitString::from_mask(x, 3)).satisfied == 7);
  }
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(CspInstance(2, {disj({{2, false}})}), Error);
  CHECK_THROWS_AS(Clause({0, 1}, {1, 0, 1}), Error);
  CHECK_THROWS_AS(Clause({0, 0}, {1, 0, 1, 1}), Error);
  CspInstance inst(4, {disj({{0, false}, {1, true}, {3, false}}), disj({{2, false}})});
  CHECK(inst.width() == 3);
  CHECK(inst.is_3sat());
  CspInstance wide(4, {Clause({0, 1, 2, 3}, std::vector<std::uint8_t>(16, 1))});
  CHECK_FALSE(wide.is_3sat());
}

TEST_CASE("dimacs parsing") {
  auto inst = parse_dimacs("p cnf 3 1\n1 -2 3 0\n");
  CHECK(inst.num_vars() == 3);
  REQUIRE(inst.clause_count() == 1);
  CHECK(inst.clause(0) == disj({{0, false}, {1, true}, {2, false}}));

  auto empty = parse_dimacs("c comment\np cnf 1 0\n");
  CHECK(empty.num_vars() == 1);
  CHECK(empty.degenerate());

  try {
    parse_dimacs("p cnf 2 1\n3 0\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.failure() == ParseFailure::literal_out_of_range);
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 x 0\n"), ParseError);
}

TEST_CASE("serialization") {
  auto inst = parse_dimacs("p cnf 3 1\n1 -2 3 0\n");
  auto text = serialize(inst);
  CHECK(text == "p cnf 3 1\n1 -2 3 0\n");
  CHECK(parse_instance(text) == inst);

  std::vector<std::uint8_t> table(32, 0);
  table[5] = table[17] = 1;
  CspInstance wide(6, {Clause({0, 1, 2, 3, 5}, table)});
  auto native = serialize(wide);
  CHECK(native.rfind("gcsp ", 0) == 0);
  CHECK(parse_instance(native) == wide);

  CspInstance none(0, {});
  auto header_only = serialize(none);
  CHECK(std::count(header_only.begin(), header_only.end(), '\n') == 1);
  CHECK(parse_instance(header_only) == none);

  CHECK(table_to_hex(std::vector<std::uint8_t>{0, 1, 1, 1}) == "e");
  CHECK(table_from_hex("e", 2) == std::vector<std::uint8_t>{0, 1, 1, 1});
  CHECK_THROWS_AS(table_from_hex("1e", 2), Error);
}

TEST_CASE("serialization round-trips generated instances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto sat = random_ksat(10, 30, 3, seed);
    CHECK(parse_instance(serialize(sat)) == sat);
    auto tables = support::random_tables(9, 25, 0.4, seed);
    CHECK(parse_instance(serialize_native(tables)) == tables);
    CHECK(serialize(parse_instance(serialize(tables))) == serialize(tables));
  }
}

TEST_CASE("csp_to_3sat") {
  SUBCASE("width-3 disjunction is unchanged") {
    CspInstance inst(3, {disj({{0, false}, {1, true}, {2, false}})});
    auto out = csp_to_3sat(inst);
    CHECK(out.instance.clauses() == inst.clauses());
    CHECK(out.instance.num_vars() == 3);
  }
  SUBCASE("width-2 clause pads to three literals") {
    CspInstance inst(2, {disj({{0, false}, {1, true}})});
    auto out = csp_to_3sat(inst);
    CHECK(out.instance.is_3sat());
    CHECK(out.instance.num_vars() <= 4);
    for (const auto& c : out.instance.clauses()) CHECK(c.arity() == 3);
    CHECK(satisfiable(out.instance) == satisfiable(inst));
    // Every primary assignment satisfying the input extends to the output.
    for (std::uint64_t x = 0; x < 4; ++x) {
      bool in = inst.clause(0).evaluate_mask(x);
      bool extends = false;
      for (std::uint64_t aux = 0; aux < (std::uint64_t{1} << (out.instance.num_vars() - 2)); ++aux) {
        auto full = BitString::from_mask(x | (aux << 2), out.instance.num_vars());
        extends = extends || satisfied_fraction(out.instance, full).satisfied == out.instance.clause_count();
      }
      CHECK(in == extends);
    }
  }
  SUBCASE("width-4 parity clause") {
    std::vector<std::uint8_t> parity(16);
    for (std::size_t i = 0; i < 16; ++i) parity[i] = static_cast<std::uint8_t>(__builtin_popcount(static_cast<unsigned>(i)) & 1);
    CspInstance inst(4, {Clause({0, 1, 2, 3}, parity)});
    auto out = csp_to_3sat(inst);
    CHECK(out.instance.is_3sat());
    CHECK(out.output_clauses <= max_expansion(4));
    CHECK(satisfiable(out.instance));
    auto odd = parity;
    for (auto& e : odd) e ^= 1;
    CspInstance both(4, {Clause({0, 1, 2, 3}, parity), Clause({0, 1, 2, 3}, odd)});
    CHECK_FALSE(satisfiable(csp_to_3sat(both).instance));
  }
  SUBCASE("random small instances stay equisatisfiable") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      auto inst = support::random_tables(5, 6, 0.7, seed);
      auto out = csp_to_3sat(inst);
      REQUIRE(out.instance.num_vars() <= 20);
      CHECK(satisfiable(out.instance) == satisfiable(inst));
      CHECK(out.instance.is_3sat());
    }
  }
  SUBCASE("width beyond the limit is refused") {
    CspInstance inst(6, {Clause({0, 1, 2, 3, 4, 5}, std::vector<std::uint8_t>(64, 1))});
    ExpansionLimits limits;
    limits.max_width = 5;
    CHECK_THROWS_AS(csp_to_3sat(inst, limits), Error);
  }
}

TEST_CASE("generators") {
  auto planted = planted_3sat(8, 40, 3);
  CHECK(planted.is_3sat());
  CHECK(support::naive_optimum(planted) == 1);
  CHECK(planted == planted_3sat(8, 40, 3));
  auto near = support::near_satisfiable(10, 32, 3, 4);
  CHECK(support::naive_optimum(near) == Rational(29, 32));
}
