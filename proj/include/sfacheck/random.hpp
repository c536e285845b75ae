#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sfacheck/decide.hpp"
#include "sfacheck/qfbapa.hpp"
#include "sfacheck/sfa.hpp"

namespace sfacheck {

/// Random instance generators for oracle-agreement runs. All draws go through
/// `uniform`, so a seed yields the same instance on every platform.
class InstanceRng {
 public:
  explicit InstanceRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  bool coin(std::uint64_t one_in = 2) { return uniform(0, static_cast<std::int64_t>(one_in) - 1) == 0; }

 private:
  std::mt19937_64 engine_;
};

struct RandomSfaShape {
  std::size_t max_states = 6;
  std::size_t max_generators = 4;
  std::size_t max_transitions = 6;
  std::int64_t max_coefficient = 4;
};

/// Integer atom with coefficients, offsets and moduli bounded by `bound`.
Predicate random_integer_atom(InstanceRng& rng, std::int64_t bound);

/// Integer-algebra automaton whose generators are named p0, p1, ...
Sfa random_sfa(InstanceRng& rng, const RandomSfaShape& shape = {});

/// Constraint with at most `max_atoms` cardinality atoms over the named
/// generators of `m`.
CardinalityConstraint random_cardinality(InstanceRng& rng, const Sfa& m, std::size_t max_atoms = 2,
                                         std::int64_t max_constant = 3);

TableAutomaton random_table_automaton(InstanceRng& rng, std::size_t max_states = 5, std::size_t max_letters = 4,
                                      std::size_t max_transitions = 8);

/// Integer-free QFBAPA formula over `set_vars`.
BapaFormula random_bapa(InstanceRng& rng, const std::vector<std::string>& set_vars, std::int64_t max_constant = 4);

}  // namespace sfacheck
