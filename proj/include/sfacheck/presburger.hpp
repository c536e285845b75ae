#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sfacheck/numeric.hpp"

namespace sfacheck {

/// Linear integer term: variables, constants, n-ary sums, constant multiples.
class Term {
 public:
  enum class Kind { var, constant, sum, scale };

  static Term var(std::string name);
  static Term constant(Int value);
  static Term sum(std::vector<Term> terms);
  static Term scale(Int factor, Term t);

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  /// Constant value, or the factor of a scale node.
  const Int& value() const { return node_->value; }
  const std::vector<Term>& children() const { return node_->children; }

 private:
  struct Node {
    Kind kind;
    std::string name;
    Int value;
    std::vector<Term> children;
  };
  explicit Term(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  std::shared_ptr<const Node> node_;
};

Term operator+(const Term& a, const Term& b);
Term operator-(const Term& a, const Term& b);
Term operator*(const Int& k, const Term& t);

class Formula {
 public:
  enum class Kind { truth, falsity, eq, le, dvd, conjunction, disjunction, negation };

  static Formula truth();
  static Formula falsity();
  static Formula eq(Term lhs, Term rhs);
  static Formula le(Term lhs, Term rhs);
  /// modulus divides t; 0 dvd t means t = 0.
  static Formula dvd(Int modulus, Term t);
  static Formula conjunction(std::vector<Formula> parts);
  static Formula disjunction(std::vector<Formula> parts);
  static Formula negation(Formula f);

  Kind kind() const { return node_->kind; }
  const Term& lhs() const { return node_->terms[0]; }
  const Term& rhs() const { return node_->terms[1]; }
  /// For dvd: the divided term.
  const Term& term() const { return node_->terms[0]; }
  const Int& modulus() const { return node_->modulus; }
  const std::vector<Formula>& children() const { return node_->children; }

 private:
  struct Node {
    Kind kind;
    std::vector<Term> terms;
    Int modulus;
    std::vector<Formula> children;
  };
  explicit Formula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  std::shared_ptr<const Node> node_;
};

Formula operator&&(const Formula& a, const Formula& b);
Formula operator||(const Formula& a, const Formula& b);
Formula operator!(const Formula& f);

/// exists v1..vn. body
struct PresburgerFormula {
  std::vector<std::string> exists;
  Formula body = Formula::truth();
};

using IntAssignment = std::map<std::string, Int>;

struct PaOptions {
  /// Search-tree nodes (disjunctive case splits plus leaves) before giving up.
  std::size_t max_cases = 200000;
  /// Branch-and-bound nodes per integer feasibility query.
  std::size_t max_branch_nodes = 200000;
};

struct PaStats {
  std::size_t cases = 0;
  std::size_t leaves = 0;
  std::size_t pruned = 0;
  std::size_t branch_nodes = 0;
};

/// A model covering the quantified and free variables, or nothing when the
/// formula is unsatisfiable. Deterministic. Throws ResourceLimit when a
/// budget from `options` is exhausted.
std::optional<IntAssignment> pa_solve(const PresburgerFormula& f, const PaOptions& options = {},
                                      PaStats* stats = nullptr);

/// Throws MissingVariable when `a` lacks a variable of `f`.
bool pa_eval(const PresburgerFormula& f, const IntAssignment& a);
bool pa_eval(const Formula& f, const IntAssignment& a);
Int pa_eval(const Term& t, const IntAssignment& a);

/// Formula and term nodes, plus one per quantified variable.
std::size_t node_count(const PresburgerFormula& f);
std::size_t node_count(const Formula& f);

/// Free variables in order of first occurrence.
std::vector<std::string> free_variables(const PresburgerFormula& f);

std::string to_string(const Term& t);
std::string to_string(const Formula& f);
std::string to_string(const PresburgerFormula& f);

}  // namespace sfacheck
