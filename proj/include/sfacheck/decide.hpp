#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfacheck/parikh.hpp"
#include "sfacheck/qfbapa.hpp"
#include "sfacheck/sfa.hpp"

namespace sfacheck {

/// A QFBAPA formula over word positions. Each set variable names the
/// predicate it denotes: the set of positions whose element satisfies it.
/// The universe U is the set of all positions 1..|w|.
struct CardinalityConstraint {
  BapaFormula formula = BapaFormula::truth();
  std::map<std::string, Predicate> bindings;
};

enum class Status { sat, unsat };

std::string to_string(Status s);

struct Diagnostics {
  /// l_beta by region bitstring (generator order).
  std::map<std::string, Int> regions;
  /// k_j for letters L_1..L_m.
  std::vector<Int> letter_counts;
  /// y_t per transition.
  std::vector<Int> flow;
  std::vector<std::string> letters;
  std::size_t oracle_calls = 0;
  std::size_t cases = 0;
  /// Set by brute_force_check: the answer is only relative to its bounds.
  bool bounded = false;
  std::string note;
};

struct SatResult {
  Status status = Status::unsat;
  std::optional<Word> witness;
  Diagnostics diagnostics;
};

struct LetterSatProfile {
  /// Witness per letter, nothing when the letter's guard is unsatisfiable.
  std::vector<std::optional<Element>> letters;
  /// Witness per region index (all 2^k regions).
  std::vector<std::optional<Element>> regions;
  std::size_t generator_count = 0;
};

struct DecideOptions {
  PaOptions arithmetic;
  std::size_t max_generators = 14;
  /// Shared memo for region and guard satisfiability; a private one is used
  /// when null.
  SatCache* cache = nullptr;
};

/// Emptiness through the Parikh image of the propositionalized automaton.
SatResult check_sat(const Sfa& m, const DecideOptions& options = {});

/// Emptiness under a cardinality constraint. Throws TooManyGenerators when
/// the generators of `m` and of the bound predicates exceed the limit, and
/// SemanticError for unbound set variables.
SatResult check_sat_card(const Sfa& m, const CardinalityConstraint& f, const DecideOptions& options = {});

/// accepts(m, w) and, when `f` is given, the constraint holds for the position
/// sets of w (integer variables of f read existentially).
bool verify_witness(const Sfa& m, const std::optional<CardinalityConstraint>& f, const Word& w);

/// Shortlex search over words of length <= max_len with letters from
/// `domain`. Throws BoundExceeded beyond 10^6 candidate words.
SatResult brute_force_check(const Sfa& m, const std::optional<CardinalityConstraint>& f,
                            const std::vector<Element>& domain, std::size_t max_len);

/// Guard and region satisfiability for every letter and every region over
/// generators(m).
LetterSatProfile letter_sat_profile(const Sfa& m);

}  // namespace sfacheck
