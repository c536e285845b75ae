#include "sfacheck/decide.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "sfacheck/errors.hpp"

namespace sfacheck {

std::string to_string(Status s) { return s == Status::sat ? "SAT" : "UNSAT"; }

namespace {

SatCache& cache_of(const DecideOptions& options, SatCache& local) { return options.cache ? *options.cache : local; }

std::string generator_var(std::size_t i) { return "g." + std::to_string(i); }

SetExpr set_of(const PropFormula& f) {
  switch (f.kind()) {
    case PropFormula::Kind::constant:
      return f.value() ? SetExpr::universe() : SetExpr::empty();
    case PropFormula::Kind::var:
      return SetExpr::var(generator_var(f.index()));
    case PropFormula::Kind::negation:
      return SetExpr::complement(set_of(f.children()[0]));
    case PropFormula::Kind::conjunction:
      return SetExpr::intersection(set_of(f.children()[0]), set_of(f.children()[1]));
    case PropFormula::Kind::disjunction:
      return SetExpr::set_union(set_of(f.children()[0]), set_of(f.children()[1]));
  }
  return SetExpr::empty();
}

using SetSubst = std::map<std::string, SetExpr>;

SetExpr substitute(const SetExpr& s, const SetSubst& sub) {
  switch (s.kind()) {
    case SetExpr::Kind::var:
      return sub.at(s.name());
    case SetExpr::Kind::set_union:
      return SetExpr::set_union(substitute(s.children()[0], sub), substitute(s.children()[1], sub));
    case SetExpr::Kind::intersection:
      return SetExpr::intersection(substitute(s.children()[0], sub), substitute(s.children()[1], sub));
    case SetExpr::Kind::complement:
      return SetExpr::complement(substitute(s.children()[0], sub));
    default:
      return s;
  }
}

BapaTerm substitute(const BapaTerm& t, const SetSubst& sub) {
  switch (t.kind()) {
    case BapaTerm::Kind::sum:
      return BapaTerm::sum(substitute(t.children()[0], sub), substitute(t.children()[1], sub));
    case BapaTerm::Kind::scale:
      return BapaTerm::scale(t.value(), substitute(t.children()[0], sub));
    case BapaTerm::Kind::card:
      return BapaTerm::card(substitute(t.set(), sub));
    default:
      return t;
  }
}

BapaFormula substitute(const BapaFormula& f, const SetSubst& sub) {
  switch (f.kind()) {
    case BapaFormula::Kind::set_eq:
      return BapaFormula::set_eq(substitute(f.set_lhs(), sub), substitute(f.set_rhs(), sub));
    case BapaFormula::Kind::subset:
      return BapaFormula::subset(substitute(f.set_lhs(), sub), substitute(f.set_rhs(), sub));
    case BapaFormula::Kind::eq:
      return BapaFormula::eq(substitute(f.lhs(), sub), substitute(f.rhs(), sub));
    case BapaFormula::Kind::le:
      return BapaFormula::le(substitute(f.lhs(), sub), substitute(f.rhs(), sub));
    case BapaFormula::Kind::dvd:
      return BapaFormula::dvd(f.modulus(), substitute(f.term(), sub));
    case BapaFormula::Kind::conjunction:
      return BapaFormula::conjunction(substitute(f.children()[0], sub), substitute(f.children()[1], sub));
    case BapaFormula::Kind::disjunction:
      return BapaFormula::disjunction(substitute(f.children()[0], sub), substitute(f.children()[1], sub));
    case BapaFormula::Kind::negation:
      return BapaFormula::negation(substitute(f.children()[0], sub));
    default:
      return f;
  }
}

Term lower_counts(const BapaTerm& t, const std::vector<std::string>& vars,
                  const std::vector<std::vector<bool>>& positions) {
  switch (t.kind()) {
    case BapaTerm::Kind::var:
      return Term::var(t.name());
    case BapaTerm::Kind::constant:
      return Term::constant(t.value());
    case BapaTerm::Kind::sum:
      return lower_counts(t.children()[0], vars, positions) + lower_counts(t.children()[1], vars, positions);
    case BapaTerm::Kind::scale:
      return Term::scale(t.value(), lower_counts(t.children()[0], vars, positions));
    case BapaTerm::Kind::card: {
      unsigned long n = 0;
      for (const auto& bits : positions) n += t.set().evaluate(vars, bits);
      return Term::constant(Int(n));
    }
  }
  return Term::constant(0);
}

Formula lower_counts(const BapaFormula& f, const std::vector<std::string>& vars,
                     const std::vector<std::vector<bool>>& positions) {
  auto rec = [&](const BapaFormula& g) { return lower_counts(g, vars, positions); };
  switch (f.kind()) {
    case BapaFormula::Kind::truth:
      return Formula::truth();
    case BapaFormula::Kind::falsity:
      return Formula::falsity();
    case BapaFormula::Kind::set_eq:
    case BapaFormula::Kind::subset:
      return rec(rewrite_atoms(f));
    case BapaFormula::Kind::eq:
      return Formula::eq(lower_counts(f.lhs(), vars, positions), lower_counts(f.rhs(), vars, positions));
    case BapaFormula::Kind::le:
      return Formula::le(lower_counts(f.lhs(), vars, positions), lower_counts(f.rhs(), vars, positions));
    case BapaFormula::Kind::dvd:
      return Formula::dvd(f.modulus(), lower_counts(f.term(), vars, positions));
    case BapaFormula::Kind::conjunction:
      return rec(f.children()[0]) && rec(f.children()[1]);
    case BapaFormula::Kind::disjunction:
      return rec(f.children()[0]) || rec(f.children()[1]);
    case BapaFormula::Kind::negation:
      return !rec(f.children()[0]);
  }
  return Formula::falsity();
}

// positions[n][i]: whether position n+1 belongs to set variable vars[i].
bool constraint_holds(const BapaFormula& f, const std::vector<std::string>& vars,
                      const std::vector<std::vector<bool>>& positions) {
  auto ints = int_variables(f);
  if (ints.empty()) {
    SetModel m;
    m.set_vars = vars;
    m.universe = Int(static_cast<unsigned long>(positions.size()));
    std::map<std::string, std::vector<std::uint64_t>> sets;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      auto& s = sets[vars[i]];
      for (std::size_t n = 0; n < positions.size(); ++n)
        if (positions[n][i]) s.push_back(n + 1);
    }
    m.sets = std::move(sets);
    return eval_bapa(f, m);
  }
  // Integer variables are read existentially once the cardinalities are fixed.
  PresburgerFormula p{ints, lower_counts(f, vars, positions)};
  return pa_solve(p).has_value();
}

std::vector<std::string> checked_set_vars(const CardinalityConstraint& c) {
  auto vars = set_variables(c.formula);
  for (const auto& v : vars)
    if (!c.bindings.count(v)) throw SemanticError("set variable '" + v + "' has no predicate binding");
  return vars;
}

Word word_of(const std::vector<std::size_t>& letters, const std::vector<std::optional<Element>>& witness) {
  Word w;
  for (std::size_t j : letters) w.push_back(*witness[j]);
  return w;
}

void record_flow(Diagnostics& d, const ParikhFormula& rho, const IntAssignment& model) {
  for (const auto& k : rho.letter_vars) d.letter_counts.push_back(model.at(k));
  for (const auto& y : rho.flow_vars) d.flow.push_back(model.at(y));
}

}  // namespace

SatResult check_sat(const Sfa& m, const DecideOptions& options) {
  SatCache local;
  SatCache& cache = cache_of(options, local);
  Propositionalization prop = propositionalize(m);
  const auto& letters = prop.automaton.letters;

  SatResult result;
  for (const auto& l : letters) result.diagnostics.letters.push_back(to_string(l));
  std::vector<std::optional<Element>> witness;
  for (const auto& guard : prop.letter_guards) witness.push_back(cache.is_satisfiable(guard));

  ParikhFormula rho = parikh_formula(prop.automaton);
  std::vector<Formula> parts{rho.formula.body};
  for (std::size_t j = 0; j < letters.size(); ++j)
    if (!witness[j]) parts.push_back(Formula::eq(Term::var(rho.letter_vars[j]), Term::constant(0)));
  PresburgerFormula query{rho.formula.exists, Formula::conjunction(std::move(parts))};

  PaStats stats;
  auto model = pa_solve(query, options.arithmetic, &stats);
  result.diagnostics.cases = stats.cases;
  result.diagnostics.oracle_calls = cache.oracle_calls();
  if (!model) return result;

  record_flow(result.diagnostics, rho, *model);
  auto path = realize_path(prop.automaton, flow_of(rho, *model));
  result.status = Status::sat;
  result.witness = word_of(path, witness);
  return result;
}

SatResult check_sat_card(const Sfa& m, const CardinalityConstraint& c, const DecideOptions& options) {
  SatCache local;
  SatCache& cache = cache_of(options, local);
  const auto set_vars = checked_set_vars(c);

  GeneratorSet g = generators(m);
  SetSubst sub;
  for (const auto& v : set_vars) {
    const Predicate& p = c.bindings.at(v);
    if (!(p.algebra() == m.algebra()))
      throw AlgebraMismatch("binding for '" + v + "' is over " + p.algebra().name() + ", automaton over " +
                            m.algebra().name());
    sub.emplace(v, set_of(propositional_form(p, g)));
  }
  const std::size_t k = g.size();
  if (k > options.max_generators)
    throw TooManyGenerators(std::to_string(k) + " generators exceed the limit of " +
                            std::to_string(options.max_generators));
  Propositionalization prop = propositionalize(m, g);
  const TableAutomaton& a = prop.automaton;
  const std::size_t letter_count = a.letters.size();

  std::vector<std::string> gvars;
  for (std::size_t i = 0; i < k; ++i) gvars.push_back(generator_var(i));
  BapaFormula f = substitute(c.formula, sub);

  // Regions that carry some letter and contain an element.
  std::vector<Minterm> regions;
  std::vector<Element> region_witness;
  std::vector<std::vector<std::size_t>> region_letters;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << k); ++i) {
    Minterm beta = Minterm::from_index(i, k);
    std::vector<std::size_t> carried;
    for (std::size_t j = 0; j < letter_count; ++j)
      if (a.letters[j].evaluate(beta.bits)) carried.push_back(j);
    if (carried.empty()) continue;
    auto d = cache.is_satisfiable(minterm_predicate(beta, prop.generators));
    if (!d) continue;
    regions.push_back(beta);
    region_witness.push_back(*d);
    region_letters.push_back(std::move(carried));
  }

  VennSystem venn = venn_expand(f, gvars, regions);
  ParikhFormula rho = parikh_formula(a);

  std::vector<Formula> parts{venn.formula.body, rho.formula.body};
  std::vector<std::string> exists = venn.formula.exists;
  exists.insert(exists.end(), rho.formula.exists.begin(), rho.formula.exists.end());
  exists.insert(exists.end(), rho.letter_vars.begin(), rho.letter_vars.end());

  std::vector<std::vector<Term>> per_letter(letter_count);
  // counter[r][j] names c_{j,beta_r} when beta_r satisfies L_j
  std::vector<std::map<std::size_t, std::string>> counter(regions.size());
  for (std::size_t r = 0; r < regions.size(); ++r) {
    std::vector<Term> in_region;
    for (std::size_t j : region_letters[r]) {
      std::string v = "c." + std::to_string(j + 1) + "." + regions[r].str();
      exists.push_back(v);
      counter[r][j] = v;
      parts.push_back(Formula::le(Term::constant(0), Term::var(v)));
      in_region.push_back(Term::var(v));
      per_letter[j].push_back(Term::var(v));
    }
    parts.push_back(Formula::eq(Term::sum(std::move(in_region)), Term::var(venn.region_vars[r])));
  }
  for (std::size_t j = 0; j < letter_count; ++j)
    parts.push_back(Formula::eq(Term::sum(std::move(per_letter[j])), Term::var(rho.letter_vars[j])));

  PresburgerFormula query{exists, Formula::conjunction(std::move(parts))};
  SatResult result;
  for (const auto& l : a.letters) result.diagnostics.letters.push_back(to_string(l));
  PaStats stats;
  auto model = pa_solve(query, options.arithmetic, &stats);
  result.diagnostics.cases = stats.cases;
  result.diagnostics.oracle_calls = cache.oracle_calls();
  if (!model) return result;

  record_flow(result.diagnostics, rho, *model);
  for (std::size_t r = 0; r < regions.size(); ++r)
    result.diagnostics.regions[regions[r].str()] = model->at(venn.region_vars[r]);

  auto path = realize_path(a, flow_of(rho, *model));
  std::vector<std::map<std::size_t, Int>> remaining(regions.size());
  for (std::size_t r = 0; r < regions.size(); ++r)
    for (const auto& [j, v] : counter[r]) remaining[r][j] = model->at(v);
  Word w;
  for (std::size_t j : path) {
    std::size_t r = 0;
    while (r < regions.size() && !(remaining[r].count(j) && remaining[r][j] > 0)) ++r;
    if (r == regions.size()) throw std::logic_error("region counters do not cover the letter sequence");
    remaining[r][j] -= 1;
    w.push_back(region_witness[r]);
  }
  if (!verify_witness(m, c, w)) throw std::logic_error("constructed witness does not satisfy the constraint");
  result.status = Status::sat;
  result.witness = std::move(w);
  return result;
}

bool verify_witness(const Sfa& m, const std::optional<CardinalityConstraint>& f, const Word& w) {
  if (!accepts(m, w)) return false;
  if (!f) return true;
  const auto vars = checked_set_vars(*f);
  std::vector<std::vector<bool>> positions;
  for (const auto& d : w) {
    std::vector<bool> bits;
    for (const auto& v : vars) bits.push_back(evaluate(f->bindings.at(v), d));
    positions.push_back(std::move(bits));
  }
  return constraint_holds(f->formula, vars, positions);
}

SatResult brute_force_check(const Sfa& m, const std::optional<CardinalityConstraint>& f,
                            const std::vector<Element>& domain, std::size_t max_len) {
  const std::size_t D = domain.size();
  double total = 0, layer = 1;
  for (std::size_t len = 0; len <= max_len; ++len, layer *= static_cast<double>(D)) total += layer;
  if (total > 1e6)
    throw BoundExceeded("brute force over " + std::to_string(D) + " elements up to length " +
                        std::to_string(max_len) + " exceeds 10^6 words");

  const std::size_t n = m.state_count();
  const auto& ts = m.transitions();
  // step[d][t]: transition t fires on domain[d]
  std::vector<std::vector<bool>> step(D, std::vector<bool>(ts.size()));
  for (std::size_t d = 0; d < D; ++d)
    for (std::size_t t = 0; t < ts.size(); ++t) step[d][t] = evaluate(ts[t].guard, domain[d]);

  std::vector<std::string> vars;
  std::vector<std::vector<bool>> member(D);
  if (f) {
    vars = checked_set_vars(*f);
    for (std::size_t d = 0; d < D; ++d)
      for (const auto& v : vars) member[d].push_back(evaluate(f->bindings.at(v), domain[d]));
  }

  SatResult result;
  result.diagnostics.bounded = true;
  result.diagnostics.note = "complete only for " + std::to_string(D) + " domain elements and length <= " +
                            std::to_string(max_len);

  std::vector<std::size_t> word;
  std::function<bool(const std::vector<bool>&, std::size_t)> dfs = [&](const std::vector<bool>& states,
                                                                       std::size_t left) {
    if (left == 0) {
      bool accepting = false;
      for (StateId q = 0; q < n; ++q) accepting = accepting || (states[q] && m.is_accepting(q));
      if (!accepting) return false;
      if (!f) return true;
      std::vector<std::vector<bool>> positions;
      for (std::size_t d : word) positions.push_back(member[d]);
      return constraint_holds(f->formula, vars, positions);
    }
    for (std::size_t d = 0; d < D; ++d) {
      std::vector<bool> next(n, false);
      bool any = false;
      for (std::size_t t = 0; t < ts.size(); ++t) {
        if (states[ts[t].source] && step[d][t]) {
          next[ts[t].target] = true;
          any = true;
        }
      }
      if (!any) continue;
      word.push_back(d);
      if (dfs(next, left - 1)) return true;
      word.pop_back();
    }
    return false;
  };

  std::vector<bool> start(n, false);
  start[m.initial()] = true;
  for (std::size_t len = 0; len <= max_len; ++len) {
    word.clear();
    if (dfs(start, len)) {
      result.status = Status::sat;
      Word w;
      for (std::size_t d : word) w.push_back(domain[d]);
      result.witness = std::move(w);
      return result;
    }
  }
  return result;
}

LetterSatProfile letter_sat_profile(const Sfa& m) {
  Propositionalization prop = propositionalize(m);
  LetterSatProfile out;
  out.generator_count = prop.generators.size();
  for (const auto& guard : prop.letter_guards) out.letters.push_back(is_satisfiable(guard));
  if (out.generator_count > 20) throw TooManyGenerators("region profile is limited to 20 generators");
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << out.generator_count); ++i)
    out.regions.push_back(is_satisfiable(minterm_predicate(Minterm::from_index(i, out.generator_count), prop.generators)));
  return out;
}

}  // namespace sfacheck
