#include <doctest.h>

#include <functional>

#include "support/oracles.hpp"
#include "sfacheck/errors.hpp"
#include "sfacheck/random.hpp"
#include "sfacheck/sfa.hpp"

using namespace sfacheck;

namespace {

const AlgebraId lia = AlgebraId::integer();

Predicate P(const char* text) { return parse_predicate(text, lia); }

Sfa odd_pos() {
  Predicate g = Predicate::conjunction(P("x % 2 == 1"), P("x > 0"));
  return Sfa(lia, {"q0", "q1"}, 0, {0}, {{0, g, 1}, {1, g, 0}});
}

bool brute_accepts_some_word(const Sfa& m, const std::vector<Element>& domain, std::size_t len) {
  Word w;
  std::function<bool()> rec = [&]() {
    if (accepts(m, w)) return true;
    if (w.size() == len) return false;
    for (auto d : domain) {
      w.push_back(d);
      if (rec()) return true;
      w.pop_back();
    }
    return false;
  };
  return rec();
}

}  // namespace

TEST_CASE("accepts on the even-length automaton") {
  Sfa m = odd_pos();
  CHECK(accepts(m, {Element{1}, Element{3}}));
  CHECK(!accepts(m, {Element{1}}));
  CHECK(accepts(m, {}));
  CHECK(!accepts(m, {Element{2}, Element{3}}));
  CHECK(!accepts(m, {Element{-1}, Element{3}}));
  CHECK(accepts(m, {Element{5}, Element{7}, Element{9}, Element{1}}));
}

TEST_CASE("construction checks and deduplication") {
  Predicate g = P("x > 0");
  Sfa m(lia, {"a", "b"}, 0, {1}, {{0, g, 1}, {0, P("x > 0"), 1}, {1, g, 1}});
  CHECK(m.transitions().size() == 2);
  CHECK_THROWS_AS(Sfa(lia, {"a"}, 1, {}, {}), SemanticError);
  CHECK_THROWS_AS(Sfa(lia, {"a"}, 0, {3}, {}), SemanticError);
  CHECK_THROWS_AS(Sfa(lia, {"a"}, 0, {}, {{0, g, 2}}), SemanticError);
  CHECK_THROWS_AS(Sfa(lia, {"a"}, 0, {}, {{0, Predicate::top(AlgebraId::bitvector(2)), 0}}), AlgebraMismatch);
  CHECK_THROWS_AS(accepts(Sfa(AlgebraId::bitvector(2), {"a"}, 0, {0}, {}), {Element{9}}), AlgebraMismatch);
}

TEST_CASE("generators") {
  GeneratorSet g = generators(odd_pos());
  REQUIRE(g.size() == 2);
  CHECK(g[0] == P("x % 2 == 1"));
  CHECK(g[1] == P("x > 0"));
  CHECK(generators(Sfa(lia, {"a"}, 0, {0}, {{0, Predicate::top(lia), 0}})).size() == 0);
  Predicate a = P("x > 1"), b = P("x < 9");
  GeneratorSet ab = generators(Sfa(lia, {"a"}, 0, {0}, {{0, a, 0}, {0, Predicate::conjunction(a, b), 0}}));
  REQUIRE(ab.size() == 2);
  CHECK(ab[0] == a);
  CHECK(ab[1] == b);
  CHECK(*ab.index_of(b) == 1);
  CHECK(!ab.index_of(P("x > 2")));

  // declared generators come first even when a guard mentions them later
  Predicate na = Predicate::named("A", a), nb = Predicate::named("B", b);
  Sfa d(lia, {"a"}, 0, {0}, {{0, nb, 0}}, {na, nb});
  GeneratorSet dg = generators(d);
  REQUIRE(dg.size() == 2);
  CHECK(*dg.index_of_name("A") == 0);
  CHECK(*dg.index_of_name("B") == 1);
}

TEST_CASE("propositionalize") {
  Propositionalization p = propositionalize(odd_pos());
  REQUIRE(p.automaton.letters.size() == 1);
  CHECK(to_string(p.automaton.letters[0]) == "S1 & S2");
  CHECK(p.automaton.state_count == 2);
  CHECK(p.automaton.transitions.size() == 2);
  CHECK(p.letter_of_transition == std::vector<std::size_t>{0, 0});

  Predicate a = P("x > 1");
  Propositionalization q = propositionalize(Sfa(lia, {"a"}, 0, {0}, {{0, a, 0}, {0, Predicate::negation(a), 0}}));
  REQUIRE(q.automaton.letters.size() == 2);
  CHECK(to_string(q.automaton.letters[0]) == "S1");
  CHECK(to_string(q.automaton.letters[1]) == "!S1");
}

TEST_CASE("minterms") {
  GeneratorSet g = generators(odd_pos());
  Predicate p11 = minterm_predicate(Minterm{{true, true}}, g);
  Predicate p00 = minterm_predicate(Minterm{{false, false}}, g);
  for (std::int64_t x = -6; x <= 6; ++x) {
    CHECK(evaluate(p11, Element{x}) == (x > 0 && x % 2 != 0));
    CHECK(evaluate(p00, Element{x}) == (x <= 0 && x % 2 == 0));
  }
  CHECK(minterm_predicate(Minterm{}, GeneratorSet(lia)).kind() == Predicate::Kind::top);
  CHECK_THROWS_AS(minterm_predicate(Minterm{{true}}, g), LengthMismatch);
  CHECK(minterm_of(Element{3}, g).str() == "11");
  CHECK(minterm_of(Element{-3}, g).str() == "10");
  CHECK(minterm_of(Element{0}, GeneratorSet(lia)).str() == "");
  CHECK(Minterm{{true, false, true}}.index() == 5);
  CHECK(Minterm::from_index(5, 3).str() == "101");

  Table t = table_of(odd_pos(), {Element{1}, Element{3}});
  REQUIRE(t.size() == 2);
  CHECK(t[0].str() == "11");
  CHECK(t[1].str() == "11");
  CHECK(table_of(odd_pos(), {}).empty());
  CHECK(table_of(odd_pos(), {Element{-1}})[0].str() == "10");
}

TEST_CASE("prune and reach") {
  CHECK(prune_and_reach(odd_pos()));
  CHECK(prune_and_reach_witness(odd_pos())->empty());
  Sfa empty(lia, {"q0", "q1"}, 0, {1}, {{0, Predicate::conjunction(P("x > 0"), P("x < 0")), 1}});
  CHECK(!prune_and_reach(empty));
  CHECK(!prune_and_reach(Sfa(lia, {"q0"}, 0, {}, {{0, Predicate::top(lia), 0}})));
  Sfa two(lia, {"q0", "q1", "q2"}, 0, {2}, {{0, P("x > 4"), 1}, {1, P("x % 3 == 2"), 2}});
  Word w = *prune_and_reach_witness(two);
  CHECK(w.size() == 2);
  CHECK(accepts(two, w));
}

TEST_CASE("property: minterms partition the domain") {
  InstanceRng rng(21);
  for (int i = 0; i < 60; ++i) {
    Sfa m = random_sfa(rng);
    GeneratorSet g = generators(m);
    std::vector<Predicate> regions;
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << g.size()); ++r)
      regions.push_back(minterm_predicate(Minterm::from_index(r, g.size()), g));
    for (std::int64_t x = -20; x <= 20; ++x) {
      std::size_t hits = 0;
      for (std::size_t r = 0; r < regions.size(); ++r)
        if (evaluate(regions[r], Element{x})) {
          ++hits;
          CHECK(r == minterm_of(Element{x}, g).index());
        }
      REQUIRE(hits == 1);
    }
  }
}

TEST_CASE("property: letters agree with guards") {
  InstanceRng rng(22);
  for (int i = 0; i < 100; ++i) {
    Sfa m = random_sfa(rng);
    Propositionalization p = propositionalize(m);
    CHECK(p.automaton.letters.size() <= m.transitions().size());
    for (std::size_t t = 0; t < m.transitions().size(); ++t) {
      const PropFormula& letter = p.automaton.letters[p.letter_of_transition[t]];
      for (std::int64_t x = -20; x <= 20; ++x)
        REQUIRE(evaluate(m.transitions()[t].guard, Element{x}) ==
                letter.evaluate(minterm_of(Element{x}, p.generators).bits));
    }
  }
}

TEST_CASE("property: tables of accepted words are accepted by the table automaton") {
  InstanceRng rng(23);
  const auto domain = oracle::int_range(-3, 3);
  for (int i = 0; i < 60; ++i) {
    Sfa m = random_sfa(rng);
    Propositionalization p = propositionalize(m);
    Word w;
    std::function<void()> rec = [&]() {
      Table t = table_of(p.generators, w);
      REQUIRE(accepts(m, w) == accepts_table(p.automaton, t));
      if (w.size() == 3) return;
      for (auto d : domain) {
        w.push_back(d);
        rec();
        w.pop_back();
      }
    };
    rec();
  }
}

TEST_CASE("property: prune_and_reach agrees with bounded search when it finds a word") {
  InstanceRng rng(24);
  const auto domain = oracle::int_range(-8, 8);
  for (int i = 0; i < 100; ++i) {
    Sfa m = random_sfa(rng);
    auto w = prune_and_reach_witness(m);
    CHECK(w.has_value() == prune_and_reach(m));
    if (w) CHECK(accepts(m, *w));
    if (brute_accepts_some_word(m, domain, 2)) CHECK(prune_and_reach(m));
  }
}
