#include <doctest.h>

#include <variant>

#include "endcert/map_dsl.hpp"
#include "oracles.hpp"

using namespace endcert;
using dsl::MapDef;
using dsl::ParseError;

namespace {

MapDef parse_ok(const std::string& src) {
  auto r = dsl::parse(src);
  REQUIRE_MESSAGE(std::holds_alternative<MapDef>(r), ("parse failed: " + src));
  return std::get<MapDef>(std::move(r));
}

ParseError parse_err(const std::string& src) {
  auto r = dsl::parse(src);
  REQUIRE_MESSAGE(std::holds_alternative<ParseError>(r), ("expected a parse error: " + src));
  return std::get<ParseError>(std::move(r));
}

}  // namespace

TEST_CASE("parsing the example sources") {
  const auto t1 = parse_ok("otherwise -> [x/4, x/2]");
  CHECK(t1.clauses.size() == 1);
  CHECK_FALSE(t1.clauses[0].is_finite);

  const auto t2 = parse_ok("if x == 1 -> {1}; otherwise -> [x/3, x/2]");
  CHECK(t2.clauses.size() == 2);
  CHECK(t2.clauses[0].is_finite);
  CHECK(t2.clauses[0].guard.cmp == dsl::Guard::Cmp::Eq);
}

TEST_CASE("positioned parse errors") {
  const auto e1 = parse_err("[x/4,");
  CHECK(e1.line == 1);
  CHECK(e1.column >= 1);
  CHECK_FALSE(e1.message.empty());

  const auto e2 = parse_err("otherwise -> [x/4,");
  CHECK(e2.column == 19);  // expression missing right at the end

  const auto e3 = parse_err("otherwise -> [x/4, x/2");  // unclosed bracket
  CHECK(e3.column == 23);
  CHECK(e3.message.find("]") != std::string::npos);

  const auto e4 = parse_err("if x = 1 -> {1}");  // stray '='
  CHECK(e4.line == 1);
  CHECK(e4.column == 6);

  const auto e5 = parse_err("otherwise -> [x/4, x/2]; if x == 1 -> {1}");
  CHECK(e5.message.find("otherwise") != std::string::npos);

  const auto e6 = parse_err("if x == 1 -> {y}");
  CHECK(e6.token == "y");

  CHECK(parse_err("").message.find("if") != std::string::npos);
  parse_err("otherwise -> [1, 2] garbage");
}

TEST_CASE("evaluating the example maps") {
  const auto ex2 = parse_ok("if x == 1 -> {1}; otherwise -> [x/3, x/2]");
  const auto at1 = dsl::eval_map(ex2, 1.0);
  CHECK(at1.is_interval());
  CHECK(at1.lo() == 1.0);
  CHECK(at1.hi() == 1.0);

  const auto at06 = dsl::eval_map(ex2, 0.6);
  CHECK(at06.lo() == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(at06.hi() == doctest::Approx(0.3).epsilon(1e-12));

  // guards compare exactly: the nearest double below 1 is not 1
  const auto nearly1 = dsl::eval_map(ex2, 0.9999999999999999);
  CHECK(nearly1.hi() < 0.5);

  const auto ex1s = parse_ok("otherwise -> [0, x/5]");
  const auto at0 = dsl::eval_map(ex1s, 0.0);
  CHECK(at0.lo() == 0.0);
  CHECK(at0.hi() == 0.0);  // degenerate singleton {0}
}

TEST_CASE("parsed sources match the hand-coded maps exactly") {
  const auto t1 = parse_ok("otherwise -> [x/4, x/2]");
  const auto s1 = parse_ok("otherwise -> [0, x/5]");
  const auto ts2 = parse_ok("if x == 1 -> {1}; otherwise -> [x/3, x/2]");
  const auto nat_t1 = oracles::example1_T();
  const auto nat_s1 = oracles::example1_S();
  const auto nat_ts2 = oracles::example2_TS();
  for (int i = 0; i <= 99; ++i) {
    const double x = static_cast<double>(i) / 99;
    const Point p(x);
    const auto a = dsl::eval_map(t1, x);
    const auto b = nat_t1(p);
    CHECK(a.lo() == b.lo());
    CHECK(a.hi() == b.hi());
    const auto c = dsl::eval_map(s1, x);
    const auto d = nat_s1(p);
    CHECK(c.lo() == d.lo());
    CHECK(c.hi() == d.hi());
    const auto e = dsl::eval_map(ts2, x);
    const auto f = nat_ts2(p);
    CHECK(e.lo() == f.lo());
    CHECK(e.hi() == f.hi());
  }
}

TEST_CASE("evaluation errors carry the offending x") {
  const auto div = parse_ok("otherwise -> [0, 1/x]");
  try {
    dsl::eval_map(div, 0.0);
    FAIL("expected a division-by-zero error");
  } catch (const dsl::MapEvalError& e) {
    CHECK(e.x() == 0.0);
  }

  const auto partial = parse_ok("if x >= 0.5 -> {x}");
  CHECK_NOTHROW(dsl::eval_map(partial, 0.7));
  CHECK_THROWS_AS(dsl::eval_map(partial, 0.2), dsl::MapEvalError);

  const auto empty = parse_ok("otherwise -> [x, x - 1]");
  try {
    dsl::eval_map(empty, 0.5);
    FAIL("expected an empty-interval error");
  } catch (const dsl::MapEvalError& e) {
    CHECK(e.x() == 0.5);
    CHECK(std::string(e.what()).find("empty") != std::string::npos);
  }
}

TEST_CASE("print round trip is idempotent") {
  const std::vector<std::string> corpus = {
      "otherwise -> [x/4, x/2]",
      "otherwise -> [0, x/5]",
      "if x == 1 -> {1}; otherwise -> [x/3, x/2]",
      "if x <= 0.5 -> [min(x, 0.25), max(x, 0.75)]; otherwise -> {abs(x - 2)}",
      "if x != 0 -> [-x/2, x + 1]; otherwise -> {0}",
      "otherwise -> [(x + 1) * (x - 1) / 4, x * x + 2]",
      "otherwise -> [x - 1 - 2 - 3, x / 2 / 2 + 8]",  // left associativity must survive
      "otherwise -> [-(x + 1) + 10, 20]",
  };
  for (const auto& src : corpus) {
    const auto once = parse_ok(src);
    const std::string printed = dsl::print(once);
    const auto twice = parse_ok(printed);
    CHECK(dsl::print(twice) == printed);
    // same values, not just the same text
    for (int i = 0; i <= 20; ++i) {
      const double x = 0.05 * i;
      const auto a = dsl::eval_map(once, x);
      const auto b = dsl::eval_map(twice, x);
      CHECK(a.lo() == b.lo());
      CHECK(a.hi() == b.hi());
    }
  }
}

TEST_CASE("coverage probe") {
  const auto partial = parse_ok("if x <= 0.5 -> [0, 1]");
  const auto miss = dsl::first_uncovered(partial, 0.0, 1.0, 101);
  REQUIRE(miss.has_value());
  CHECK(*miss > 0.5);
  CHECK_FALSE(dsl::first_uncovered(parse_ok("otherwise -> [0, 1]"), 0.0, 1.0, 101).has_value());

  const auto split = parse_ok("if x < 0.5 -> [0, 0]; if x >= 0.5 -> [1, 1]");
  CHECK_FALSE(dsl::first_uncovered(split, 0.0, 1.0, 101).has_value());
}

TEST_CASE("to_multimap adapts evaluation") {
  const auto mm = dsl::to_multimap(parse_ok("otherwise -> [x/4, x/2]"));
  const auto img = mm(Point(1.0));
  CHECK(img.lo() == 0.25);
  CHECK(img.hi() == 0.5);
}
