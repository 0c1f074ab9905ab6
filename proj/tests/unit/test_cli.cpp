#include <doctest.h>

#include <array>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "gapforge/circuit/circuit.hpp"
#include "gapforge/csp/generate.hpp"
#include "gapforge/csp/io.hpp"
#include "support.hpp"

using Json = nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "gapforge");
  std::ostringstream out, err;
  int code = gapforge::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write(const std::string& name, const std::string& text) {
  auto path = support::temp_path(name);
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

}  // namespace

TEST_CASE("transform reports accounting") {
  auto r = run({"transform", "--m", "16", "--n", "8", "--seed", "3"});
  REQUIRE(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["seed"] == 3);
  CHECK(j["accounting"]["proof_length"] == 8 + 31);
  CHECK(j["accounting"]["randomness_bits"] == 4);
  CHECK(j["accounting"]["random_strings"] == 16);
  CHECK(j["certificate"]["pass"] == true);
}

TEST_CASE("randomized transform at m=256") {
  auto r = run({"transform", "--variant", "rand", "--m", "256", "--n", "10", "--fanin", "24"});
  REQUIRE(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["circuit"]["depth"] == 3);
  CHECK(j["accounting"]["extra_query_bound"] == 24 * 3 + 4);
}

TEST_CASE("loaded circuit without certificate is refused") {
  auto path = write("c16.txt", gapforge::circuit::serialize_circuit(gapforge::circuit::build_deterministic(16)));
  auto r = run({"transform", "--m", "16", "--circuit", path});
  CHECK(r.code == 1);
  CHECK_FALSE(r.err.empty());
  CHECK(run({"transform", "--m", "16", "--circuit", path, "--waive-cert"}).code == 0);
  CHECK(run({"transform", "--m", "16", "--circuit", path, "--certify"}).code == 0);
}

TEST_CASE("certify") {
  auto good = run({"certify", "--m", "16"});
  CHECK(good.code == 0);
  CHECK(Json::parse(good.out)["pass"] == true);

  std::string bad = "rcirc 4 2 det 4/5\nlayer 1 4 2 sampler\n0\n1\nlayer 2 2 1 full\n0 1\n";
  auto r = run({"certify", write("bad.txt", bad)});
  CHECK(r.code == 1);
  auto j = Json::parse(r.out);
  CHECK(j["pass"] == false);
  CHECK(j["certificate"]["goodness"]["layers"][0]["pass"] == false);
  CHECK(j["certificate"]["goodness"]["layers"][0]["worst_input"].get<std::string>().size() == 4);

  auto stat = Json::parse(run({"certify", "--m", "64", "--exhaustive-cap", "16", "--trials", "5"}).out);
  auto layer0 = stat["certificate"]["goodness"]["layers"][0];
  CHECK(layer0["mode"] == "statistical");
  CHECK(layer0["strings_checked"].get<long>() > 0);
  CHECK(stat["certificate"]["goodness"]["trials"] == 5);
}

TEST_CASE("oracle and exit codes") {
  auto path = write("one.cnf", "p cnf 3 1\n1 -2 3 0\n");
  auto r = run({"oracle", path});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["optimum"] == "1/1");
  CHECK(run({"oracle", write("broken.cnf", "p cnf 2 1\n3 0\n")}).code == 2);
  CHECK(run({"oracle", "--m", "10", "--n", "30", "--exhaustive-cap", "20"}).code == 3);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"transform", "--m", "16", "--variant", "sideways"}).code == 2);
}

TEST_CASE("gap-reduce") {
  std::array<std::array<std::size_t, 3>, 2> triples{{{0, 1, 2}, {1, 2, 3}}};
  auto no_path = write("no.cnf", gapforge::csp::serialize(gapforge::csp::sign_pattern_blocks(4, triples)));
  auto no = run({"gap-reduce", no_path, "--trials", "6"});
  REQUIRE(no.code == 0);
  auto j = Json::parse(no.out);
  CHECK(j["verdict"] == "NO");
  CHECK(j["trials"].size() == 6);

  auto yes_path = write("yes.cnf", gapforge::csp::serialize(gapforge::csp::planted_3sat(5, 16, 3)));
  auto yes = Json::parse(run({"gap-reduce", yes_path, "--stop-at-first"}).out);
  CHECK(yes["verdict"] == "YES");
  CHECK(yes["first_yes"].is_number());

  auto dry = Json::parse(run({"gap-reduce", no_path, "--dry-run"}).out);
  CHECK(dry.contains("lll"));
  CHECK(dry.contains("first_list"));
  CHECK_FALSE(dry.contains("trials"));

  auto wide = write("wide.gcsp", gapforge::csp::serialize(support::random_tables(5, 4, 0.5, 1)));
  CHECK(run({"gap-reduce", wide}).code == 2);
}

TEST_CASE("seed handling and report files") {
  auto a = run({"transform", "--m", "16", "--seed", "9"});
  setenv("GAPFORGE_SEED", "9", 1);
  auto b = run({"transform", "--m", "16"});
  unsetenv("GAPFORGE_SEED");
  CHECK(a.out == b.out);
  auto path = support::temp_path("report.json");
  auto c = run({"transform", "--m", "16", "--seed", "9", "--report", path});
  CHECK(c.code == 0);
  CHECK(support::read_text(path) == a.out);
}
