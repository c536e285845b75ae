#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sfacheck/algebra.hpp"

namespace sfacheck {

using StateId = std::size_t;

struct Transition {
  StateId source;
  Predicate guard;
  StateId target;
};

/// Symbolic finite automaton over one algebra. Immutable once built.
class Sfa {
 public:
  /// Validates the tuple and drops duplicate transitions (same source,
  /// structurally equal guard, same target), keeping the first. Throws
  /// SemanticError on out-of-range states and AlgebraMismatch on guards of a
  /// foreign algebra.
  Sfa(AlgebraId algebra, std::vector<std::string> state_names, StateId initial,
      std::vector<StateId> accepting, std::vector<Transition> transitions,
      std::vector<Predicate> declared_generators = {});

  const AlgebraId& algebra() const { return algebra_; }
  std::size_t state_count() const { return state_names_.size(); }
  const std::vector<std::string>& state_names() const { return state_names_; }
  StateId initial() const { return initial_; }
  bool is_accepting(StateId q) const { return accepting_[q]; }
  /// Accepting states in increasing order.
  std::vector<StateId> accepting_states() const;
  const std::vector<Transition>& transitions() const { return transitions_; }
  /// Atomic predicates declared up front (named predicates of a file);
  /// they come first in the generator order.
  const std::vector<Predicate>& declared_generators() const { return declared_; }

 private:
  AlgebraId algebra_;
  std::vector<std::string> state_names_;
  StateId initial_;
  std::vector<bool> accepting_;
  std::vector<Transition> transitions_;
  std::vector<Predicate> declared_;
};

/// Ordered atomic predicates phi_1..phi_k.
class GeneratorSet {
 public:
  explicit GeneratorSet(AlgebraId algebra, std::vector<Predicate> generators = {});

  const AlgebraId& algebra() const { return algebra_; }
  std::size_t size() const { return generators_.size(); }
  const std::vector<Predicate>& generators() const { return generators_; }
  const Predicate& operator[](std::size_t i) const { return generators_[i]; }
  /// Position of an atomic predicate, if present.
  std::optional<std::size_t> index_of(const Predicate& atom) const;
  /// Position of the named generator called `name`.
  std::optional<std::size_t> index_of_name(const std::string& name) const;
  /// Appends `atom` if it is not present yet; returns its position.
  std::size_t add(const Predicate& atom);

 private:
  AlgebraId algebra_;
  std::vector<Predicate> generators_;
};

/// Propositional formula over the set variables S_1..S_k (0-based in code).
class PropFormula {
 public:
  enum class Kind { constant, var, negation, conjunction, disjunction };

  static PropFormula constant(bool value);
  static PropFormula var(std::size_t index);
  static PropFormula negation(PropFormula f);
  static PropFormula conjunction(PropFormula a, PropFormula b);
  static PropFormula disjunction(PropFormula a, PropFormula b);

  Kind kind() const { return node_->kind; }
  bool value() const { return node_->value; }
  std::size_t index() const { return node_->index; }
  const std::vector<PropFormula>& children() const { return node_->children; }

  /// Truth value under the assignment S_i := bits[i].
  bool evaluate(const std::vector<bool>& bits) const;
  /// Largest variable index plus one (0 for variable-free formulas).
  std::size_t arity() const;

  friend bool operator==(const PropFormula& a, const PropFormula& b);

 private:
  struct Node {
    Kind kind;
    bool value = false;
    std::size_t index = 0;
    std::vector<PropFormula> children;
  };
  explicit PropFormula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  std::shared_ptr<const Node> node_;
};

/// "S1 & !S2"-style text with 1-based indices.
std::string to_string(const PropFormula& f);

/// Element of {0,1}^k; bit i tells whether phi_{i+1} holds.
struct Minterm {
  std::vector<bool> bits;

  std::size_t size() const { return bits.size(); }
  /// Index in lexicographic order: bit 0 is the most significant.
  std::uint64_t index() const;
  static Minterm from_index(std::uint64_t index, std::size_t k);
  /// "101" for bits {1,0,1}; "" when k = 0.
  std::string str() const;

  friend auto operator<=>(const Minterm&, const Minterm&) = default;
};

using Table = std::vector<Minterm>;

struct TableTransition {
  StateId source;
  std::size_t letter;
  StateId target;
};

/// The propositionalized automaton: same graph, guards replaced by letters.
struct TableAutomaton {
  std::size_t state_count = 0;
  StateId initial = 0;
  std::vector<bool> accepting;
  std::vector<TableTransition> transitions;
  std::vector<PropFormula> letters;
  std::size_t generator_count = 0;
};

struct Propositionalization {
  /// automaton.letters holds L_1..L_m.
  TableAutomaton automaton;
  GeneratorSet generators;
  /// letter_of_transition[t] = letter index of transition t.
  std::vector<std::size_t> letter_of_transition;
  /// A guard per letter: the first transition guard mapped to it.
  std::vector<Predicate> letter_guards;
};

/// True iff some accepting run reads `w`; simulated on state subsets.
bool accepts(const Sfa& m, const Word& w);

/// Declared generators, then the remaining atoms of the guards in order of
/// first occurrence (left to right, transition order).
GeneratorSet generators(const Sfa& m);

/// Replaces every atom phi_i of `p` by S_i, adding unseen atoms to `g`.
PropFormula propositional_form(const Predicate& p, GeneratorSet& g);

/// Propositionalization with generators(m).
Propositionalization propositionalize(const Sfa& m);
/// Propositionalization over a caller-provided generator set (extended in
/// place by any atom it lacks).
Propositionalization propositionalize(const Sfa& m, GeneratorSet g);

/// Conjunction of phi_i (bit set) and !phi_i (bit clear). Throws
/// LengthMismatch when |beta| != k.
Predicate minterm_predicate(const Minterm& beta, const GeneratorSet& g);

Minterm minterm_of(Element d, const GeneratorSet& g);

Table table_of(const Sfa& m, const Word& w);
Table table_of(const GeneratorSet& g, const Word& w);

/// Classical emptiness check: drop unsatisfiable guards, then test graph
/// reachability of an accepting state. True when the language is non-empty.
bool prune_and_reach(const Sfa& m);

/// A shortest word along the pruned graph, when one exists.
std::optional<Word> prune_and_reach_witness(const Sfa& m);

/// Runs the table automaton on a sequence of minterms: each step must take a
/// transition whose letter the minterm satisfies.
bool accepts_table(const TableAutomaton& a, const Table& t);

/// Runs the table automaton on a letter sequence.
bool accepts_letters(const TableAutomaton& a, const std::vector<std::size_t>& letters);

}  // namespace sfacheck
