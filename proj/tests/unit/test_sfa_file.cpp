#include <doctest.h>

#include <string>

#include "sfacheck/errors.hpp"
#include "sfacheck/random.hpp"
#include "sfacheck/sfa_file.hpp"

using namespace sfacheck;

namespace {

const char* kOddPos =
    "# comment\n"
    "algebra lia\n"
    "pred odd \"x % 2 == 1\"\n"
    "pred pos \"x > 0\"   # trailing\n"
    "states q0 q1\n"
    "initial q0\n"
    "accepting q0\n"
    "trans q0 q1 odd && pos\n"
    "trans q1 q0 (odd & pos)\n"
    "cardinality \"|odd & pos| = 2\"\n";

std::string with_line(const std::string& base, const std::string& line) { return base + line + "\n"; }

const std::string kHeader = "algebra lia\npred odd \"x % 2 == 1\"\nstates a b\ninitial a\n";

ParseError parse_error(const std::string& text) {
  try {
    parse_sfa_file(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no parse error");
  return ParseError("", 0, 0);
}

}  // namespace

TEST_CASE("parse") {
  SfaFile f = parse_sfa_file(kOddPos);
  CHECK(f.algebra == AlgebraId::integer());
  REQUIRE(f.preds.size() == 2);
  CHECK(f.preds[1].name == "pos");
  CHECK(f.preds[1].text == "x > 0");
  CHECK(f.sfa.state_count() == 2);
  CHECK(f.sfa.accepting_states() == std::vector<StateId>{0});
  // the two guards are the same predicate, so one transition per pair
  CHECK(f.sfa.transitions().size() == 2);
  CHECK(f.sfa.transitions()[0].guard == f.sfa.transitions()[1].guard);
  CHECK(f.sfa.declared_generators().size() == 2);
  REQUIRE(f.cardinality);
  CHECK(f.cardinality->bindings.size() == 2);
  CHECK(to_string(f.cardinality->formula) == "|odd & pos| = 2");
  CHECK(accepts(f.sfa, {Element{1}, Element{3}}));
  CHECK(!accepts(f.sfa, {Element{1}, Element{2}}));
}

TEST_CASE("bitvector files") {
  SfaFile f = parse_sfa_file("algebra bv 4\npred low \"in {1, 2}\"\nstates s\ninitial s\naccepting s\ntrans s s !low\n");
  CHECK(f.algebra == AlgebraId::bitvector(4));
  CHECK(accepts(f.sfa, {Element{0}, Element{15}}));
  CHECK(!accepts(f.sfa, {Element{2}}));
}

TEST_CASE("print round-trips") {
  SfaFile f = parse_sfa_file(kOddPos);
  std::string text = print_sfa_file(f);
  CHECK(text ==
        "algebra lia\npred odd \"x % 2 == 1\"\npred pos \"x > 0\"\nstates q0 q1\ninitial q0\naccepting q0\n"
        "trans q0 q1 (odd & pos)\ntrans q1 q0 (odd & pos)\ncardinality \"|odd & pos| = 2\"\n");
  SfaFile g = parse_sfa_file(text);
  CHECK(print_sfa_file(g) == text);
  CHECK(guard_to_string(Predicate::negation(f.sfa.transitions()[0].guard)) == "!(odd & pos)");
  CHECK(guard_to_string(Predicate::top(AlgebraId::integer())) == "true");
}

TEST_CASE("property: random automata round-trip through text") {
  InstanceRng rng(71);
  for (int i = 0; i < 100; ++i) {
    Sfa m = random_sfa(rng);
    SfaFile f{m.algebra(), {}, m, std::nullopt, std::nullopt};
    for (const auto& g : m.declared_generators()) f.preds.push_back({g.name(), to_string(g.children()[0]), g});
    std::string text = print_sfa_file(f);
    SfaFile back = parse_sfa_file(text);
    REQUIRE(print_sfa_file(back) == text);
    CHECK(back.sfa.transitions().size() == m.transitions().size());
    for (std::size_t t = 0; t < m.transitions().size(); ++t)
      for (std::int64_t v = -6; v <= 6; ++v)
        CHECK(evaluate(back.sfa.transitions()[t].guard, Element{v}) == evaluate(m.transitions()[t].guard, Element{v}));
  }
}

TEST_CASE("parse errors carry positions") {
  ParseError guard = parse_error(with_line(kHeader, "trans a b (odd &"));
  CHECK(guard.line() == 5);
  CHECK(guard.column() == 17);
  ParseError pred = parse_error("algebra lia\npred odd \"x %% 2\"\n");
  CHECK(pred.line() == 2);
  CHECK(pred.column() > 10);
  ParseError directive = parse_error(with_line(kHeader, "  transition a b odd"));
  CHECK(directive.line() == 5);
  CHECK(directive.column() == 3);
  ParseError card = parse_error(with_line(kHeader, "cardinality \"|odd| = \""));
  CHECK(card.line() == 5);
  CHECK(card.column() > 13);
  CHECK(parse_error("algebra bv x\n").column() == 12);
  CHECK(parse_error("algebra lia\npred odd \"x > 0\n").line() == 2);
  CHECK(parse_error(with_line(kHeader, "initial a b")).column() == 11);
  CHECK(parse_error(with_line(kHeader, "cardinality |odd| = 1")).line() == 5);
}

TEST_CASE("semantic errors") {
  CHECK_THROWS_AS(parse_sfa_file(with_line(kHeader, "trans a c odd")), SemanticError);
  CHECK_THROWS_AS(parse_sfa_file(with_line(kHeader, "trans a b even")), SemanticError);
  CHECK_THROWS_AS(parse_sfa_file(with_line(kHeader, "pred odd \"x > 1\"")), SemanticError);
  CHECK_THROWS_AS(parse_sfa_file(with_line(kHeader, "pred U \"x > 1\"")), SemanticError);
  CHECK_THROWS_AS(parse_sfa_file(with_line(kHeader, "pred true \"x > 1\"")), SemanticError);
  CHECK_THROWS_AS(parse_sfa_file(with_line(kHeader, "initial b")), SemanticError);
  CHECK_THROWS_AS(parse_sfa_file(with_line(kHeader, "states a")), SemanticError);
  CHECK_THROWS_AS(parse_sfa_file("states a\ninitial a\n"), SemanticError);
  CHECK_THROWS_AS(parse_sfa_file("algebra lia\nstates a\n"), SemanticError);
  CHECK_THROWS_AS(parse_sfa_file("algebra lia\ninitial a\n"), SemanticError);
  CHECK_THROWS_AS(parse_sfa_file("algebra bv 0\nstates a\ninitial a\n"), SemanticError);
  CHECK_THROWS_AS(parse_sfa_file("algebra lia\nalgebra lia\n"), SemanticError);
  CHECK_THROWS_AS(load_sfa_file("/nonexistent/file.sfa"), Error);
  CHECK_THROWS_AS(parse_sfa_file(with_line(kHeader, "cardinality \"|odd| = 1\"\ncardinality \"|odd| = 2\"")),
                  SemanticError);
}

TEST_CASE("cardinality names must be declared predicates") {
  CHECK_THROWS_AS(parse_sfa_file(with_line(kHeader, "cardinality \"|even| = 1\"")), ParseError);
  SfaFile f = parse_sfa_file(with_line(kHeader, "cardinality \"|U| = 2 & |~odd| >= 1\""));
  CHECK(set_variables(f.cardinality->formula) == std::vector<std::string>{"odd"});
}
