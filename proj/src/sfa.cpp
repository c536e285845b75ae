#include "sfacheck/sfa.hpp"

#include <deque>
#include <sstream>

#include "sfacheck/errors.hpp"

namespace sfacheck {

Sfa::Sfa(AlgebraId algebra, std::vector<std::string> state_names, StateId initial,
         std::vector<StateId> accepting, std::vector<Transition> transitions,
         std::vector<Predicate> declared_generators)
    : algebra_(algebra),
      state_names_(std::move(state_names)),
      initial_(initial),
      accepting_(state_names_.size(), false),
      declared_(std::move(declared_generators)) {
  const std::size_t n = state_names_.size();
  if (n == 0) throw SemanticError("automaton needs at least one state");
  if (initial_ >= n) throw SemanticError("initial state out of range");
  for (StateId q : accepting) {
    if (q >= n) throw SemanticError("accepting state out of range");
    accepting_[q] = true;
  }
  for (const auto& g : declared_) {
    if (!(g.algebra() == algebra_)) throw AlgebraMismatch("generator of algebra " + g.algebra().name());
    if (!g.is_atomic()) throw SemanticError("declared generator must be atomic");
  }
  for (auto& t : transitions) {
    if (t.source >= n || t.target >= n) throw SemanticError("transition endpoint out of range");
    if (!(t.guard.algebra() == algebra_))
      throw AlgebraMismatch("guard of algebra " + t.guard.algebra().name() + " in " + algebra_.name() +
                            " automaton");
    bool duplicate = false;
    for (const auto& kept : transitions_) {
      if (kept.source == t.source && kept.target == t.target && kept.guard == t.guard) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) transitions_.push_back(std::move(t));
  }
}

std::vector<StateId> Sfa::accepting_states() const {
  std::vector<StateId> out;
  for (StateId q = 0; q < accepting_.size(); ++q)
    if (accepting_[q]) out.push_back(q);
  return out;
}

// ---------------------------------------------------------------------------

GeneratorSet::GeneratorSet(AlgebraId algebra, std::vector<Predicate> generators) : algebra_(algebra) {
  for (const auto& g : generators) add(g);
}

std::optional<std::size_t> GeneratorSet::index_of(const Predicate& atom) const {
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (generators_[i] == atom) return i;
  return std::nullopt;
}

std::optional<std::size_t> GeneratorSet::index_of_name(const std::string& name) const {
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (generators_[i].kind() == Predicate::Kind::named && generators_[i].name() == name) return i;
  return std::nullopt;
}

std::size_t GeneratorSet::add(const Predicate& atom) {
  if (!atom.is_atomic()) throw SemanticError("generators must be atomic predicates");
  if (!(atom.algebra() == algebra_)) throw AlgebraMismatch("generator of algebra " + atom.algebra().name());
  if (auto i = index_of(atom)) return *i;
  generators_.push_back(atom);
  return generators_.size() - 1;
}

// ---------------------------------------------------------------------------

PropFormula PropFormula::constant(bool value) {
  Node n{Kind::constant};
  n.value = value;
  return PropFormula(std::move(n));
}

PropFormula PropFormula::var(std::size_t index) {
  Node n{Kind::var};
  n.index = index;
  return PropFormula(std::move(n));
}

PropFormula PropFormula::negation(PropFormula f) {
  Node n{Kind::negation};
  n.children = {std::move(f)};
  return PropFormula(std::move(n));
}

PropFormula PropFormula::conjunction(PropFormula a, PropFormula b) {
  Node n{Kind::conjunction};
  n.children = {std::move(a), std::move(b)};
  return PropFormula(std::move(n));
}

PropFormula PropFormula::disjunction(PropFormula a, PropFormula b) {
  Node n{Kind::disjunction};
  n.children = {std::move(a), std::move(b)};
  return PropFormula(std::move(n));
}

bool PropFormula::evaluate(const std::vector<bool>& bits) const {
  switch (kind()) {
    case Kind::constant: return value();
    case Kind::var:
      if (index() >= bits.size()) throw LengthMismatch("assignment shorter than formula arity");
      return bits[index()];
    case Kind::negation: return !children()[0].evaluate(bits);
    case Kind::conjunction: return children()[0].evaluate(bits) && children()[1].evaluate(bits);
    case Kind::disjunction: return children()[0].evaluate(bits) || children()[1].evaluate(bits);
  }
  return false;
}

std::size_t PropFormula::arity() const {
  switch (kind()) {
    case Kind::constant: return 0;
    case Kind::var: return index() + 1;
    default: {
      std::size_t a = 0;
      for (const auto& c : children()) a = std::max(a, c.arity());
      return a;
    }
  }
}

bool operator==(const PropFormula& a, const PropFormula& b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.value() == b.value() && a.index() == b.index() &&
         a.children() == b.children();
}

namespace {

void print(std::ostream& os, const PropFormula& f) {
  using K = PropFormula::Kind;
  switch (f.kind()) {
    case K::constant: os << (f.value() ? "true" : "false"); return;
    case K::var: os << "S" << f.index() + 1; return;
    case K::negation:
      os << "!";
      if (f.children()[0].kind() == K::var || f.children()[0].kind() == K::constant) {
        print(os, f.children()[0]);
      } else {
        os << "(";
        print(os, f.children()[0]);
        os << ")";
      }
      return;
    case K::conjunction:
    case K::disjunction:
      for (std::size_t i = 0; i < 2; ++i) {
        const auto& c = f.children()[i];
        bool wrap = (c.kind() == K::conjunction || c.kind() == K::disjunction) && c.kind() != f.kind();
        if (i == 1) os << (f.kind() == K::conjunction ? " & " : " | ");
        if (wrap) os << "(";
        print(os, c);
        if (wrap) os << ")";
      }
      return;
  }
}

}  // namespace

std::string to_string(const PropFormula& f) {
  std::ostringstream os;
  print(os, f);
  return os.str();
}

// ---------------------------------------------------------------------------

std::uint64_t Minterm::index() const {
  if (bits.size() > 63) throw LengthMismatch("minterm too long to index");
  std::uint64_t v = 0;
  for (bool b : bits) v = (v << 1) | (b ? 1U : 0U);
  return v;
}

Minterm Minterm::from_index(std::uint64_t index, std::size_t k) {
  Minterm m;
  m.bits.resize(k);
  for (std::size_t i = 0; i < k; ++i) m.bits[i] = (index >> (k - 1 - i)) & 1U;
  return m;
}

std::string Minterm::str() const {
  std::string s;
  for (bool b : bits) s.push_back(b ? '1' : '0');
  return s;
}

// ---------------------------------------------------------------------------

bool accepts(const Sfa& m, const Word& w) {
  if (m.algebra().kind() == AlgebraId::Kind::bitvector)
    for (Element d : w)
      if (d.value < 0 || static_cast<std::uint64_t>(d.value) >> m.algebra().width())
        throw AlgebraMismatch("element " + std::to_string(d.value) + " is outside " + m.algebra().name());
  std::vector<bool> current(m.state_count(), false);
  current[m.initial()] = true;
  for (Element d : w) {
    std::vector<bool> next(m.state_count(), false);
    bool any = false;
    for (const auto& t : m.transitions()) {
      if (current[t.source] && !next[t.target] && evaluate(t.guard, d)) {
        next[t.target] = true;
        any = true;
      }
    }
    if (!any) return false;
    current = std::move(next);
  }
  for (StateId q = 0; q < m.state_count(); ++q)
    if (current[q] && m.is_accepting(q)) return true;
  return false;
}

namespace {

void collect_atoms(const Predicate& p, GeneratorSet& g) {
  if (p.is_atomic()) {
    g.add(p);
    return;
  }
  for (const auto& c : p.children()) collect_atoms(c, g);
}

}  // namespace

GeneratorSet generators(const Sfa& m) {
  GeneratorSet g(m.algebra(), m.declared_generators());
  for (const auto& t : m.transitions()) collect_atoms(t.guard, g);
  return g;
}

PropFormula propositional_form(const Predicate& p, GeneratorSet& g) {
  using K = Predicate::Kind;
  switch (p.kind()) {
    case K::top: return PropFormula::constant(true);
    case K::bottom: return PropFormula::constant(false);
    case K::atom:
    case K::named: return PropFormula::var(g.add(p));
    case K::negation: return PropFormula::negation(propositional_form(p.children()[0], g));
    case K::conjunction: {
      auto a = propositional_form(p.children()[0], g);
      return PropFormula::conjunction(std::move(a), propositional_form(p.children()[1], g));
    }
    case K::disjunction: {
      auto a = propositional_form(p.children()[0], g);
      return PropFormula::disjunction(std::move(a), propositional_form(p.children()[1], g));
    }
  }
  return PropFormula::constant(false);
}

Propositionalization propositionalize(const Sfa& m) { return propositionalize(m, generators(m)); }

Propositionalization propositionalize(const Sfa& m, GeneratorSet g) {
  Propositionalization out{TableAutomaton{}, std::move(g), {}, {}};
  TableAutomaton& a = out.automaton;
  a.state_count = m.state_count();
  a.initial = m.initial();
  a.accepting.assign(m.state_count(), false);
  for (StateId q = 0; q < m.state_count(); ++q) a.accepting[q] = m.is_accepting(q);
  for (const auto& t : m.transitions()) {
    PropFormula f = propositional_form(t.guard, out.generators);
    std::size_t letter = a.letters.size();
    for (std::size_t j = 0; j < a.letters.size(); ++j) {
      if (a.letters[j] == f) {
        letter = j;
        break;
      }
    }
    if (letter == a.letters.size()) {
      a.letters.push_back(f);
      out.letter_guards.push_back(t.guard);
    }
    a.transitions.push_back({t.source, letter, t.target});
    out.letter_of_transition.push_back(letter);
  }
  a.generator_count = out.generators.size();
  return out;
}

Predicate minterm_predicate(const Minterm& beta, const GeneratorSet& g) {
  if (beta.size() != g.size())
    throw LengthMismatch("minterm has " + std::to_string(beta.size()) + " bits for " +
                         std::to_string(g.size()) + " generators");
  Predicate p = Predicate::top(g.algebra());
  for (std::size_t i = 0; i < g.size(); ++i)
    p = Predicate::conjunction(p, beta.bits[i] ? g[i] : Predicate::negation(g[i]));
  return p;
}

Minterm minterm_of(Element d, const GeneratorSet& g) {
  Minterm m;
  m.bits.reserve(g.size());
  for (const auto& phi : g.generators()) m.bits.push_back(evaluate(phi, d));
  return m;
}

Table table_of(const GeneratorSet& g, const Word& w) {
  Table t;
  t.reserve(w.size());
  for (Element d : w) t.push_back(minterm_of(d, g));
  return t;
}

Table table_of(const Sfa& m, const Word& w) { return table_of(generators(m), w); }

namespace {

// Breadth-first search over transitions with satisfiable guards. Returns
// the transition path to the first accepting state found.
std::optional<std::vector<std::size_t>> pruned_path(const Sfa& m, std::vector<std::optional<Element>>& sat) {
  const auto& ts = m.transitions();
  sat.clear();
  for (const auto& t : ts) sat.push_back(is_satisfiable(t.guard));
  std::vector<std::optional<std::size_t>> via(m.state_count());
  std::vector<bool> seen(m.state_count(), false);
  std::deque<StateId> queue{m.initial()};
  seen[m.initial()] = true;
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    if (m.is_accepting(q)) {
      std::vector<std::size_t> path;
      for (StateId s = q; via[s]; s = ts[*via[s]].source) path.push_back(*via[s]);
      return std::vector<std::size_t>(path.rbegin(), path.rend());
    }
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (ts[i].source == q && sat[i] && !seen[ts[i].target]) {
        seen[ts[i].target] = true;
        via[ts[i].target] = i;
        queue.push_back(ts[i].target);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

bool prune_and_reach(const Sfa& m) {
  std::vector<std::optional<Element>> sat;
  return pruned_path(m, sat).has_value();
}

std::optional<Word> prune_and_reach_witness(const Sfa& m) {
  std::vector<std::optional<Element>> sat;
  auto path = pruned_path(m, sat);
  if (!path) return std::nullopt;
  Word w;
  for (std::size_t t : *path) w.push_back(*sat[t]);
  return w;
}

namespace {

template <typename Step>
bool run_table(const TableAutomaton& a, std::size_t length, Step allowed) {
  std::vector<bool> current(a.state_count, false);
  current[a.initial] = true;
  for (std::size_t i = 0; i < length; ++i) {
    std::vector<bool> next(a.state_count, false);
    for (const auto& t : a.transitions)
      if (current[t.source] && allowed(i, t.letter)) next[t.target] = true;
    current = std::move(next);
  }
  for (StateId q = 0; q < a.state_count; ++q)
    if (current[q] && a.accepting[q]) return true;
  return false;
}

}  // namespace

bool accepts_table(const TableAutomaton& a, const Table& t) {
  return run_table(a, t.size(),
                   [&](std::size_t i, std::size_t letter) { return a.letters[letter].evaluate(t[i].bits); });
}

bool accepts_letters(const TableAutomaton& a, const std::vector<std::size_t>& letters) {
  return run_table(a, letters.size(), [&](std::size_t i, std::size_t letter) { return letters[i] == letter; });
}

}  // namespace sfacheck
