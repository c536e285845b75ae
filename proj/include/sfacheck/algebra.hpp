#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "sfacheck/bdd.hpp"

namespace sfacheck {

/// Identity of an effective Boolean algebra: integer linear arithmetic over
/// one variable `x`, or fixed-width bitvectors.
class AlgebraId {
 public:
  enum class Kind { integer, bitvector };

  static AlgebraId integer() { return AlgebraId(Kind::integer, 0); }
  /// Throws SemanticError unless 1 <= width <= Bdd::kMaxWidth.
  static AlgebraId bitvector(unsigned width);

  Kind kind() const { return kind_; }
  unsigned width() const { return width_; }
  /// "lia" or "bv<width>".
  std::string name() const;

  friend bool operator==(const AlgebraId&, const AlgebraId&) = default;

 private:
  AlgebraId(Kind kind, unsigned width) : kind_(kind), width_(width) {}
  Kind kind_;
  unsigned width_;
};

/// A domain element. For the bitvector algebra it lies in [0, 2^width).
struct Element {
  std::int64_t value = 0;
  friend auto operator<=>(const Element&, const Element&) = default;
};

using Word = std::vector<Element>;

enum class Cmp { lt, le, eq, ge, gt, ne };

/// coef * x + offset <cmp> 0
struct LinearAtom {
  std::int64_t coef;
  std::int64_t offset;
  Cmp cmp;
  friend bool operator==(const LinearAtom&, const LinearAtom&) = default;
};

/// x mod modulus == residue, with the non-negative remainder; modulus >= 1.
struct CongruenceAtom {
  std::int64_t modulus;
  std::int64_t residue;
  friend bool operator==(const CongruenceAtom&, const CongruenceAtom&) = default;
};

/// A set of bitvectors given by its diagram.
struct BitSetAtom {
  Bdd diagram;
  friend bool operator==(const BitSetAtom&, const BitSetAtom&) = default;
};

using Atom = std::variant<LinearAtom, CongruenceAtom, BitSetAtom>;

/// Immutable predicate of one algebra.
///
/// Internally a Boolean combination over algebra atoms. A `named` node wraps
/// a predicate under a declared name and is treated as atomic by generator
/// extraction. Bitvector predicates carry their denotation as a diagram.
class Predicate {
 public:
  enum class Kind { top, bottom, atom, named, negation, conjunction, disjunction };

  static Predicate top(const AlgebraId& algebra);
  static Predicate bottom(const AlgebraId& algebra);
  static Predicate atom(const AlgebraId& algebra, Atom a);
  static Predicate named(std::string name, const Predicate& body);

  // Structural constructors. They apply only unit simplifications
  // (top/bottom absorption, double negation) and throw AlgebraMismatch when
  // the algebras differ.
  static Predicate negation(const Predicate& p);
  static Predicate conjunction(const Predicate& p, const Predicate& q);
  static Predicate disjunction(const Predicate& p, const Predicate& q);

  const AlgebraId& algebra() const { return algebra_; }
  Kind kind() const;
  /// Only for Kind::atom.
  const Atom& atom_value() const;
  /// Only for Kind::named.
  const std::string& name() const;
  /// One child for negation and named, two for conjunction/disjunction.
  const std::vector<Predicate>& children() const;
  /// Denotation of a bitvector predicate.
  const Bdd& diagram() const;

  /// Atomic for generator extraction: grammar atoms and named predicates.
  bool is_atomic() const { return kind() == Kind::atom || kind() == Kind::named; }

  std::size_t hash() const;
  friend bool operator==(const Predicate& a, const Predicate& b);

 private:
  struct Node;
  Predicate(AlgebraId algebra, std::shared_ptr<const Node> node)
      : algebra_(algebra), node_(std::move(node)) {}
  static Predicate make(AlgebraId algebra, Node node);

  AlgebraId algebra_;
  std::shared_ptr<const Node> node_;
};

struct PredicateHash {
  std::size_t operator()(const Predicate& p) const { return p.hash(); }
};

enum class BoolOp { and_, or_, not_ };

/// Boolean combination; `q` must be absent exactly for BoolOp::not_.
Predicate combine(BoolOp op, const Predicate& p, const std::optional<Predicate>& q = std::nullopt);

/// Membership test. Throws AlgebraMismatch when `d` is outside a bitvector
/// predicate's domain.
bool evaluate(const Predicate& p, Element d);

/// A witness of non-emptiness, or nothing when the predicate denotes the
/// empty set. Deterministic.
std::optional<Element> is_satisfiable(const Predicate& p);

/// Parses `text` in the predicate grammar of `algebra`. Throws ParseError.
Predicate parse_predicate(std::string_view text, const AlgebraId& algebra);

/// Text in the predicate grammar; named predicates print as their body.
std::string to_string(const Predicate& p);

/// Thread-safe memo table for is_satisfiable keyed by structural equality.
class SatCache {
 public:
  std::optional<Element> is_satisfiable(const Predicate& p);
  std::size_t size() const;
  std::size_t oracle_calls() const;

 private:
  mutable std::mutex mutex_;
  std::unordered_map<Predicate, std::optional<Element>, PredicateHash> memo_;
  std::size_t calls_ = 0;
};

}  // namespace sfacheck
