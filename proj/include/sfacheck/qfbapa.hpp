#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sfacheck/presburger.hpp"
#include "sfacheck/sfa.hpp"

namespace sfacheck {

/// Set expression: variables, the empty set, the universe, union,
/// intersection, complement.
class SetExpr {
 public:
  enum class Kind { var, empty, universe, set_union, intersection, complement };

  static SetExpr var(std::string name);
  static SetExpr empty();
  static SetExpr universe();
  static SetExpr set_union(SetExpr a, SetExpr b);
  static SetExpr intersection(SetExpr a, SetExpr b);
  static SetExpr complement(SetExpr a);

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const std::vector<SetExpr>& children() const { return node_->children; }

  /// Membership of an element whose set-variable memberships are `bits`
  /// (ordered as `vars`).
  bool evaluate(const std::vector<std::string>& vars, const std::vector<bool>& bits) const;

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<SetExpr> children;
  };
  explicit SetExpr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  std::shared_ptr<const Node> node_;
};

/// Integer term that may mention cardinalities |B|.
class BapaTerm {
 public:
  enum class Kind { var, constant, sum, scale, card };

  static BapaTerm var(std::string name);
  static BapaTerm constant(Int value);
  static BapaTerm sum(BapaTerm a, BapaTerm b);
  static BapaTerm scale(Int factor, BapaTerm t);
  static BapaTerm card(SetExpr s);

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const Int& value() const { return node_->value; }
  const std::vector<BapaTerm>& children() const { return node_->children; }
  /// For card terms.
  const SetExpr& set() const { return *node_->set; }

 private:
  struct Node {
    Kind kind;
    std::string name;
    Int value;
    std::vector<BapaTerm> children;
    std::optional<SetExpr> set;
  };
  explicit BapaTerm(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  std::shared_ptr<const Node> node_;
};

class BapaFormula {
 public:
  enum class Kind { truth, falsity, set_eq, subset, eq, le, dvd, conjunction, disjunction, negation };

  static BapaFormula truth();
  static BapaFormula falsity();
  static BapaFormula set_eq(SetExpr a, SetExpr b);
  static BapaFormula subset(SetExpr a, SetExpr b);
  static BapaFormula eq(BapaTerm a, BapaTerm b);
  static BapaFormula le(BapaTerm a, BapaTerm b);
  static BapaFormula dvd(Int modulus, BapaTerm t);
  static BapaFormula conjunction(BapaFormula a, BapaFormula b);
  static BapaFormula disjunction(BapaFormula a, BapaFormula b);
  static BapaFormula negation(BapaFormula f);

  Kind kind() const { return node_->kind; }
  const SetExpr& set_lhs() const { return node_->sets[0]; }
  const SetExpr& set_rhs() const { return node_->sets[1]; }
  const BapaTerm& lhs() const { return node_->terms[0]; }
  const BapaTerm& rhs() const { return node_->terms[1]; }
  /// For dvd.
  const BapaTerm& term() const { return node_->terms[0]; }
  const Int& modulus() const { return node_->modulus; }
  const std::vector<BapaFormula>& children() const { return node_->children; }

 private:
  struct Node {
    Kind kind;
    std::vector<SetExpr> sets;
    std::vector<BapaTerm> terms;
    Int modulus;
    std::vector<BapaFormula> children;
  };
  explicit BapaFormula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  std::shared_ptr<const Node> node_;
};

/// Set variables in order of first occurrence.
std::vector<std::string> set_variables(const BapaFormula& f);
/// Integer variables in order of first occurrence.
std::vector<std::string> int_variables(const BapaFormula& f);

/// Finite model: Venn region sizes l_beta (by minterm index over
/// `set_vars`), optional concrete sets over [1..universe], integer values.
struct SetModel {
  std::vector<std::string> set_vars;
  Int universe = 0;
  std::vector<Int> regions;
  /// Sorted 1-based members per set variable.
  std::optional<std::map<std::string, std::vector<std::uint64_t>>> sets;
  IntAssignment ints;
};

/// Sparse certificate: the listed regions (minterm indices) and an
/// assignment for the expansion restricted to them.
struct SparseCertificate {
  std::vector<std::uint64_t> regions;
  IntAssignment assignment;
};

/// Replaces B1 = B2 and B1 sub B2 by cardinality constraints.
BapaFormula rewrite_atoms(const BapaFormula& f);

/// The arithmetic image of a set formula over a list of Venn regions.
///
/// Variables: card.i for the i-th distinct cardinality expression (in order
/// of first occurrence), l.<beta> for each listed region. Integer variables
/// of the formula stay free.
struct VennSystem {
  PresburgerFormula formula;
  std::vector<SetExpr> card_exprs;
  std::vector<std::string> card_vars;
  std::vector<std::string> region_vars;
};

std::string region_var(const Minterm& beta);

/// Expects rewrite_atoms to have been applied.
VennSystem venn_expand(const BapaFormula& f, const std::vector<std::string>& set_vars,
                       const std::vector<Minterm>& regions);

/// Number of distinct cardinality expressions after rewrite_atoms.
std::size_t cardinality_count(const BapaFormula& f);

/// floor(2p * log2(4p * a)) for p >= 1, 0 for p = 0; a < 1 counts as 1.
std::uint64_t sparsity_bound(std::uint64_t p, std::uint64_t a);

struct BapaOptions {
  std::size_t max_set_vars = 14;
  /// Concrete sets are materialized only up to this universe size.
  std::uint64_t max_concrete_universe = 1000000;
  PaOptions arithmetic;
};

/// Full Venn expansion over all 2^e regions. Throws TooManySetVariables when
/// e > options.max_set_vars.
std::optional<SetModel> qfbapa_solve(const BapaFormula& f, const BapaOptions& options = {});
std::optional<SetModel> qfbapa_solve(const BapaFormula& f, const std::vector<std::string>& set_vars,
                                     const BapaOptions& options = {});

/// Accepts iff the region list is valid (in range, distinct, within the
/// sparsity bound) and the assignment satisfies the restricted expansion.
bool qfbapa_verify(const BapaFormula& f, const SparseCertificate& c);
bool qfbapa_verify(const BapaFormula& f, const std::vector<std::string>& set_vars, const SparseCertificate& c);

/// A certificate within the sparsity bound: the support of the solver's model
/// when small enough, otherwise the first region subset (by size, then
/// lexicographically) whose restricted expansion is satisfiable.
std::optional<SparseCertificate> find_sparse_certificate(const BapaFormula& f, const BapaOptions& options = {});

/// Evaluates over the concrete sets of `m`. Throws MissingConcreteSets when
/// they are absent and MissingVariable for unassigned integer variables.
bool eval_bapa(const BapaFormula& f, const SetModel& m);

/// Parses the textual grammar. With `set_vars` given, exactly those names
/// are set variables; otherwise identifiers starting with an uppercase
/// letter other than U are. Throws ParseError.
BapaFormula parse_bapa(std::string_view text, const std::optional<std::set<std::string>>& set_vars = std::nullopt);

std::string to_string(const SetExpr& s);
std::string to_string(const BapaTerm& t);
std::string to_string(const BapaFormula& f);

}  // namespace sfacheck
