#include "sfacheck/random.hpp"

namespace sfacheck {

std::int64_t InstanceRng::uniform(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(engine_() % span);
}

Predicate random_integer_atom(InstanceRng& rng, std::int64_t bound) {
  const AlgebraId lia = AlgebraId::integer();
  if (rng.coin(3)) {
    std::int64_t m = rng.uniform(1, bound);
    return Predicate::atom(lia, CongruenceAtom{m, rng.uniform(0, m - 1)});
  }
  std::int64_t coef = 0;
  while (coef == 0) coef = rng.uniform(-bound, bound);
  static const Cmp cmps[] = {Cmp::lt, Cmp::le, Cmp::eq, Cmp::ge, Cmp::gt, Cmp::ne};
  return Predicate::atom(lia, LinearAtom{coef, rng.uniform(-bound, bound), cmps[rng.uniform(0, 5)]});
}

namespace {

Predicate random_guard(InstanceRng& rng, const std::vector<Predicate>& gens, int depth) {
  if (depth == 0 || rng.coin(3)) {
    if (rng.coin(12)) return rng.coin() ? Predicate::top(AlgebraId::integer()) : Predicate::bottom(AlgebraId::integer());
    Predicate p = gens[rng.uniform(0, static_cast<std::int64_t>(gens.size()) - 1)];
    return rng.coin(3) ? Predicate::negation(p) : p;
  }
  Predicate a = random_guard(rng, gens, depth - 1);
  Predicate b = random_guard(rng, gens, depth - 1);
  Predicate c = rng.coin() ? Predicate::conjunction(a, b) : Predicate::disjunction(a, b);
  return rng.coin(5) ? Predicate::negation(c) : c;
}

SetExpr random_set(InstanceRng& rng, const std::vector<std::string>& vars, int depth) {
  if (depth == 0 || rng.coin(2)) {
    if (rng.coin(10)) return SetExpr::universe();
    if (rng.coin(20)) return SetExpr::empty();
    SetExpr v = SetExpr::var(vars[rng.uniform(0, static_cast<std::int64_t>(vars.size()) - 1)]);
    return rng.coin(3) ? SetExpr::complement(v) : v;
  }
  SetExpr a = random_set(rng, vars, depth - 1);
  SetExpr b = random_set(rng, vars, depth - 1);
  return rng.coin() ? SetExpr::intersection(a, b) : SetExpr::set_union(a, b);
}

BapaFormula compare(InstanceRng& rng, const BapaTerm& t, std::int64_t c) {
  BapaTerm k = BapaTerm::constant(Int(static_cast<long>(c)));
  switch (rng.uniform(0, 5)) {
    case 0:
      return BapaFormula::eq(t, k);
    case 1:
      return BapaFormula::le(t, k);
    case 2:
      return BapaFormula::le(k, t);
    case 3:
      return BapaFormula::le(BapaTerm::sum(t, BapaTerm::constant(1)), k);
    case 4:
      return BapaFormula::le(BapaTerm::sum(k, BapaTerm::constant(1)), t);
    default:
      return BapaFormula::negation(BapaFormula::eq(t, k));
  }
}

BapaFormula combine_atoms(InstanceRng& rng, std::vector<BapaFormula> atoms) {
  BapaFormula f = atoms[0];
  for (std::size_t i = 1; i < atoms.size(); ++i)
    f = rng.coin(3) ? BapaFormula::disjunction(f, atoms[i]) : BapaFormula::conjunction(f, atoms[i]);
  return rng.coin(6) ? BapaFormula::negation(f) : f;
}

}  // namespace

Sfa random_sfa(InstanceRng& rng, const RandomSfaShape& shape) {
  const std::size_t n = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(shape.max_states)));
  const std::size_t k = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(shape.max_generators)));
  const std::size_t t = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(shape.max_transitions)));
  std::vector<Predicate> gens;
  for (std::size_t i = 0; i < k; ++i)
    gens.push_back(Predicate::named("p" + std::to_string(i), random_integer_atom(rng, shape.max_coefficient)));
  std::vector<std::string> names;
  for (std::size_t q = 0; q < n; ++q) names.push_back("q" + std::to_string(q));
  std::vector<StateId> accepting;
  for (std::size_t q = 0; q < n; ++q)
    if (rng.coin(3)) accepting.push_back(q);
  std::vector<Transition> ts;
  auto state = [&] { return static_cast<StateId>(rng.uniform(0, static_cast<std::int64_t>(n) - 1)); };
  for (std::size_t i = 0; i < t; ++i) {
    StateId s = state();
    Predicate g = random_guard(rng, gens, 2);
    ts.push_back({s, g, state()});
  }
  return Sfa(AlgebraId::integer(), names, 0, accepting, ts, gens);
}

CardinalityConstraint random_cardinality(InstanceRng& rng, const Sfa& m, std::size_t max_atoms,
                                         std::int64_t max_constant) {
  CardinalityConstraint c;
  std::vector<std::string> vars;
  for (const auto& g : m.declared_generators()) {
    vars.push_back(g.name());
    c.bindings.emplace(g.name(), g);
  }
  const std::size_t atoms = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(max_atoms)));
  std::vector<BapaFormula> parts;
  for (std::size_t i = 0; i < atoms; ++i) {
    if (rng.coin(6)) {
      SetExpr a = random_set(rng, vars, 1);
      SetExpr b = random_set(rng, vars, 1);
      parts.push_back(BapaFormula::subset(a, b));
      continue;
    }
    BapaTerm t = BapaTerm::card(random_set(rng, vars, 1));
    std::int64_t k = rng.uniform(0, max_constant);
    parts.push_back(compare(rng, t, k));
  }
  c.formula = combine_atoms(rng, std::move(parts));
  return c;
}

TableAutomaton random_table_automaton(InstanceRng& rng, std::size_t max_states, std::size_t max_letters,
                                      std::size_t max_transitions) {
  TableAutomaton a;
  a.state_count = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(max_states)));
  const std::size_t m = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(max_letters)));
  for (std::size_t j = 0; j < m; ++j) a.letters.push_back(PropFormula::var(j));
  a.generator_count = m;
  a.initial = 0;
  a.accepting.assign(a.state_count, false);
  for (std::size_t q = 0; q < a.state_count; ++q) a.accepting[q] = rng.coin(3);
  const std::size_t t = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(max_transitions)));
  auto state = [&] { return static_cast<StateId>(rng.uniform(0, static_cast<std::int64_t>(a.state_count) - 1)); };
  for (std::size_t i = 0; i < t; ++i) {
    StateId s = state();
    std::size_t letter = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(m) - 1));
    a.transitions.push_back({s, letter, state()});
  }
  return a;
}

BapaFormula random_bapa(InstanceRng& rng, const std::vector<std::string>& set_vars, std::int64_t max_constant) {
  const std::size_t atoms = static_cast<std::size_t>(rng.uniform(1, 3));
  std::vector<BapaFormula> parts;
  for (std::size_t i = 0; i < atoms; ++i) {
    switch (rng.uniform(0, 5)) {
      case 0:
      case 1: {
        bool subset = rng.coin();
        SetExpr a = random_set(rng, set_vars, 1);
        SetExpr b = random_set(rng, set_vars, 1);
        parts.push_back(subset ? BapaFormula::subset(a, b) : BapaFormula::set_eq(a, b));
        break;
      }
      case 2: {
        Int k(static_cast<long>(rng.uniform(1, max_constant)));
        parts.push_back(BapaFormula::dvd(k, BapaTerm::card(random_set(rng, set_vars, 1))));
        break;
      }
      case 3: {
        BapaTerm a = BapaTerm::card(random_set(rng, set_vars, 1));
        Int factor(static_cast<long>(rng.uniform(-2, 2)));
        BapaTerm b = BapaTerm::card(random_set(rng, set_vars, 1));
        std::int64_t k = rng.uniform(-max_constant, max_constant);
        parts.push_back(compare(rng, BapaTerm::sum(a, BapaTerm::scale(factor, b)), k));
        break;
      }
      default: {
        BapaTerm t = BapaTerm::card(random_set(rng, set_vars, 2));
        std::int64_t k = rng.uniform(0, max_constant);
        parts.push_back(compare(rng, t, k));
      }
    }
  }
  return combine_atoms(rng, std::move(parts));
}

}  // namespace sfacheck
