#include <doctest.h>

#include <functional>

#include "support/oracles.hpp"
#include "sfacheck/errors.hpp"
#include "sfacheck/qfbapa.hpp"
#include "sfacheck/random.hpp"

using namespace sfacheck;

namespace {

BapaFormula F(const char* text) { return parse_bapa(text); }

std::vector<Minterm> regions(std::size_t e, std::vector<std::uint64_t> idx) {
  std::vector<Minterm> out;
  for (auto i : idx) out.push_back(Minterm::from_index(i, e));
  return out;
}

SetModel concrete(std::uint64_t u, std::map<std::string, std::vector<std::uint64_t>> sets) {
  SetModel m;
  for (const auto& [k, v] : sets) m.set_vars.push_back(k);
  m.universe = Int(static_cast<unsigned long>(u));
  m.sets = std::move(sets);
  return m;
}

bool has_set_atoms(const BapaFormula& f) {
  switch (f.kind()) {
    case BapaFormula::Kind::set_eq:
    case BapaFormula::Kind::subset:
      return true;
    case BapaFormula::Kind::conjunction:
    case BapaFormula::Kind::disjunction:
    case BapaFormula::Kind::negation:
      for (const auto& c : f.children())
        if (has_set_atoms(c)) return true;
      return false;
    default:
      return false;
  }
}

// Concrete sets over [1..u] for every region-size vector.
void each_model(const std::vector<std::string>& vars, std::size_t max_u, const std::function<void(const SetModel&)>& fn) {
  for (std::size_t u = 0; u <= max_u; ++u)
    oracle::compositions(std::size_t{1} << vars.size(), u,
                         [&](const std::vector<std::size_t>& sizes) { fn(oracle::model_from_regions(vars, sizes)); });
}

}  // namespace

TEST_CASE("rewrite_atoms") {
  CHECK(to_string(rewrite_atoms(F("A = B"))) == "(|A & ~B| = 0 & |B & ~A| = 0)");
  CHECK(to_string(rewrite_atoms(F("A sub A"))) == "|A & ~A| = 0");
  CHECK(to_string(rewrite_atoms(F("|A| = 1"))) == "|A| = 1");
  CHECK(!has_set_atoms(rewrite_atoms(F("!(A = B) || (A + B sub ~C & |C| = 2)"))));
}

TEST_CASE("property: rewrite_atoms preserves meaning") {
  InstanceRng rng(51);
  const std::vector<std::string> vars{"A", "B", "C"};
  for (int i = 0; i < 60; ++i) {
    BapaFormula f = random_bapa(rng, vars, 3);
    BapaFormula g = rewrite_atoms(f);
    CHECK(!has_set_atoms(g));
    each_model(vars, 3, [&](const SetModel& m) { REQUIRE(eval_bapa(f, m) == eval_bapa(g, m)); });
  }
}

TEST_CASE("venn_expand") {
  BapaFormula f = F("|A|=2 & |B|=2 & |A+B|=3");
  VennSystem sys = venn_expand(f, {"A", "B"}, regions(2, {0, 1, 2, 3}));
  CHECK(sys.region_vars == std::vector<std::string>{"l.00", "l.01", "l.10", "l.11"});
  CHECK(sys.card_vars.size() == 3);
  auto forced = pa_solve({sys.formula.exists, sys.formula.body && !Formula::eq(Term::var("l.11"), Term::constant(1))});
  CHECK(!forced);
  CHECK(pa_solve(sys.formula));

  VennSystem empty = venn_expand(F("|U| = 0"), {"A"}, regions(1, {0, 1}));
  auto m = pa_solve(empty.formula);
  REQUIRE(m);
  CHECK(m->at("l.0") + m->at("l.1") == 0);

  VennSystem single = venn_expand(F("|A| = 1"), {"A", "B"}, regions(2, {2}));
  auto s = pa_solve(single.formula);
  REQUIRE(s);
  CHECK(s->at("l.10") == 1);

  CHECK_THROWS_AS(venn_expand(F("|C| = 1"), {"A"}, regions(1, {0})), SemanticError);
  CHECK_THROWS_AS(venn_expand(F("|A| = 1"), {"A"}, regions(2, {0})), LengthMismatch);
}

TEST_CASE("divisibility passes through to arithmetic") {
  VennSystem sys = venn_expand(F("3 dvd |A| & |A| >= 1"), {"A"}, regions(1, {0, 1}));
  auto m = pa_solve(sys.formula);
  REQUIRE(m);
  CHECK(m->at("l.1") == 3);
}

TEST_CASE("qfbapa_solve examples") {
  auto m = qfbapa_solve(F("|A|=2 & |B|=2 & |A+B|=3"));
  REQUIRE(m);
  CHECK(m->regions == std::vector<Int>{0, 1, 1, 1});
  CHECK(m->universe == 3);
  REQUIRE(m->sets);
  CHECK(m->sets->at("A") == std::vector<std::uint64_t>{2, 3});
  CHECK(m->sets->at("B") == std::vector<std::uint64_t>{1, 3});
  CHECK(!qfbapa_solve(F("A sub B & |A| = 3 & |B| = 2")));
  auto z = qfbapa_solve(F("|U| = 0"));
  REQUIRE(z);
  CHECK(z->universe == 0);
  CHECK(z->regions == std::vector<Int>{0});
}

TEST_CASE("integer variables") {
  auto m = qfbapa_solve(F("|A| + x = 5 & x >= 2 & |A| >= 3 & |U| = |A|"));
  REQUIRE(m);
  CHECK(m->ints.at("x") == 2);
  CHECK(eval_bapa(F("|A| + x = 5 & x >= 2 & |A| >= 3 & |U| = |A|"), *m));
  CHECK(!qfbapa_solve(F("2*x = |A| & |A| = 3")));
  CHECK(int_variables(F("|A| + x = y")) == std::vector<std::string>{"x", "y"});
}

TEST_CASE("set-variable limit") {
  std::vector<std::string> vars;
  for (int i = 0; i < 15; ++i) vars.push_back("S" + std::to_string(i));
  CHECK_THROWS_AS(qfbapa_solve(F("|U| = 1"), vars), TooManySetVariables);
}

TEST_CASE("eval_bapa examples") {
  CHECK(eval_bapa(F("|A| = 1"), concrete(3, {{"A", {2}}})));
  CHECK(!eval_bapa(F("A = U"), concrete(2, {{"A", {1}}})));
  CHECK(eval_bapa(F("2 dvd |A|"), concrete(0, {{"A", {}}})));
  SetModel no_sets;
  no_sets.set_vars = {"A"};
  CHECK_THROWS_AS(eval_bapa(F("|A| = 1"), no_sets), MissingConcreteSets);
  CHECK_THROWS_AS(eval_bapa(F("|A| = x"), concrete(1, {{"A", {1}}})), MissingVariable);
}

TEST_CASE("sparsity bound") {
  CHECK(sparsity_bound(0, 5) == 0);
  CHECK(sparsity_bound(1, 1) == 4);
  CHECK(sparsity_bound(3, 1) == 21);
  CHECK(sparsity_bound(1, 0) == sparsity_bound(1, 1));
  for (std::uint64_t p = 0; p < 200; ++p)
    for (std::uint64_t a : {1u, 2u, 7u}) CHECK(sparsity_bound(p + 1, a) >= sparsity_bound(p, a));
}

TEST_CASE("qfbapa_verify examples") {
  BapaFormula f = F("|A|=2 & |B|=2 & |A+B|=3");
  SparseCertificate c{{1, 2, 3}, {{"l.01", 1}, {"l.10", 1}, {"l.11", 1}, {"card.0", 2}, {"card.1", 2}, {"card.2", 3}}};
  CHECK(qfbapa_verify(f, c));
  CHECK(!qfbapa_verify(F("|U| >= 1"), SparseCertificate{{}, {}}));
  SparseCertificate wrong = c;
  wrong.assignment["l.11"] = 2;
  CHECK(!qfbapa_verify(f, wrong));
  SparseCertificate missing = c;
  missing.assignment.erase("card.2");
  CHECK(!qfbapa_verify(f, missing));
  SparseCertificate repeated = c;
  repeated.regions = {1, 1, 3};
  CHECK(!qfbapa_verify(f, repeated));
  SparseCertificate outside = c;
  outside.regions = {1, 2, 4};
  CHECK(!qfbapa_verify(f, outside));
  auto found = find_sparse_certificate(f);
  REQUIRE(found);
  CHECK(found->regions == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(qfbapa_verify(f, *found));
  CHECK(!find_sparse_certificate(F("A sub B & |A| = 3 & |B| = 2")));
}

TEST_CASE("certificates beyond the sparsity bound are rejected") {
  // p = 1 gives a bound of 4 regions
  BapaFormula f = F("|U| = 5");
  SparseCertificate c{{0, 1, 2, 3, 4}, {{"card.0", 5}}};
  for (auto r : c.regions) c.assignment[region_var(Minterm::from_index(r, 3))] = 1;
  CHECK(!qfbapa_verify(f, {"A", "B", "C"}, c));
  c.regions.pop_back();
  c.assignment.erase("l.100");
  c.assignment["l.011"] = 2;
  CHECK(qfbapa_verify(f, {"A", "B", "C"}, c));
}

TEST_CASE("parser") {
  CHECK(to_string(F("|A & ~B| + 2*x <= 3 || !(3 dvd |U|)")) == "((|A & ~B| + 2*x) <= 3 or !(3 dvd |U|))");
  CHECK(to_string(F("A + B == {} and not |A|>2")) == "((A + B) = empty & !((2 + 1) <= |A|))");
  CHECK(to_string(F("A subseteq B && true")) == "(A sub B & true)");
  CHECK(to_string(F("(A & B) sub C")) == "(A & B) sub C");
  CHECK(to_string(F("|A| - |B| >= -1")) == "-1 <= (|A| + -1*|B|)");
  CHECK(set_variables(F("|A| = 1 & B sub ~C")) == std::vector<std::string>{"A", "B", "C"});
  CHECK(set_variables(parse_bapa("|odd & pos| = 2", std::set<std::string>{"odd", "pos"})) ==
        std::vector<std::string>{"odd", "pos"});
  CHECK_THROWS_AS(F("|A| = "), ParseError);
  CHECK_THROWS_AS(F("|A = 1"), ParseError);
  CHECK_THROWS_AS(F("|A| = 1 |"), ParseError);
  CHECK(eval_bapa(F("0 dvd |A|"), concrete(1, {{"A", {}}})));
  CHECK(!eval_bapa(F("0 dvd |A|"), concrete(1, {{"A", {1}}})));
  CHECK_THROWS_AS(parse_bapa("|odd| = 1", std::set<std::string>{"pos"}), ParseError);
}

TEST_CASE("property: printing round-trips") {
  InstanceRng rng(52);
  const std::vector<std::string> vars{"A", "B", "C"};
  for (int i = 0; i < 200; ++i) {
    BapaFormula f = random_bapa(rng, vars, 4);
    std::string text = to_string(f);
    REQUIRE(to_string(F(text.c_str())) == text);
  }
}

TEST_CASE("property: region-size enumeration matches literal enumeration") {
  InstanceRng rng(53);
  const std::vector<std::string> vars{"A", "B"};
  for (int i = 0; i < 60; ++i) {
    BapaFormula f = random_bapa(rng, vars, 3);
    for (std::size_t u = 0; u <= 3; ++u) {
      bool by_regions = false;
      oracle::compositions(4, u, [&](const std::vector<std::size_t>& sizes) {
        by_regions = by_regions || eval_bapa(f, oracle::model_from_regions(vars, sizes));
      });
      REQUIRE(by_regions == oracle::enumerate_bapa_literal(f, vars, u));
    }
  }
}

TEST_CASE("property: solver agrees with enumeration and models are valid") {
  InstanceRng rng(54);
  const std::vector<std::string> pool{"A", "B", "C"};
  int sat = 0, unsat = 0;
  for (int i = 0; i < 150; ++i) {
    std::vector<std::string> vars(pool.begin(), pool.begin() + rng.uniform(1, 3));
    BapaFormula f = random_bapa(rng, vars, 4);
    BapaFormula bounded = BapaFormula::conjunction(f, F("|U| <= 6"));
    auto solved = qfbapa_solve(bounded, vars);
    auto enumerated = oracle::enumerate_bapa(f, vars, 6);
    INFO(to_string(f));
    REQUIRE(solved.has_value() == enumerated.has_value());
    if (solved) {
      ++sat;
      REQUIRE(solved->sets);
      CHECK(eval_bapa(f, *solved));
      Int total = 0;
      for (const auto& l : solved->regions) total += l;
      CHECK(total == solved->universe);
    } else {
      ++unsat;
    }
  }
  CHECK(sat > 0);
  CHECK(unsat > 0);
}

TEST_CASE("property: certificates are sound and sparse ones exist") {
  InstanceRng rng(55);
  const std::vector<std::string> vars{"A", "B", "C"};
  for (int i = 0; i < 100; ++i) {
    BapaFormula f = random_bapa(rng, vars, 4);
    auto cert = find_sparse_certificate(f);
    CHECK(cert.has_value() == qfbapa_solve(f).has_value());
    if (!cert) {
      // nothing can convince the verifier of an unsatisfiable formula
      SparseCertificate guess{{0, 1}, {}};
      CHECK(!qfbapa_verify(f, guess));
      continue;
    }
    CHECK(cert->regions.size() <= sparsity_bound(cardinality_count(f), 1));
    CHECK(qfbapa_verify(f, *cert));
    const auto used = set_variables(f);
    VennSystem sys = venn_expand(f, used, regions(used.size(), cert->regions));
    CHECK(pa_eval(sys.formula, cert->assignment));
    // perturbing a region count breaks the certificate unless the
    // perturbed assignment still satisfies the restricted system
    for (const auto& rv : sys.region_vars) {
      SparseCertificate bad = *cert;
      bad.assignment[rv] += 1;
      CHECK(qfbapa_verify(f, bad) == pa_eval(sys.formula, bad.assignment));
    }
  }
}
