#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "sfacheck/presburger.hpp"
#include "sfacheck/sfa.hpp"

namespace sfacheck {

/// Existential Presburger formula for the Parikh image of a table automaton.
///
/// Variables: k.j (letter L_j count, free, 1-based), y.t (uses of transition
/// t), e.q (final-state selector for accepting q), z.q (spanning depth).
struct ParikhFormula {
  PresburgerFormula formula;
  std::vector<std::string> letter_vars;
  std::vector<std::string> flow_vars;
  std::vector<std::string> depth_vars;
  /// Selector per accepting state, aligned with `finals`.
  std::vector<std::string> selector_vars;
  std::vector<StateId> finals;
  StateId initial = 0;
};

/// node_count(rho) <= kParikhSizeConstant * (|Q| + |Delta| + m) for every
/// table automaton. The one-state accepting automaton reaches 30; each
/// further transition adds at most 27 nodes, state 29, letter 3.
inline constexpr std::size_t kParikhSizeConstant = 30;

struct FlowModel {
  std::vector<Int> y;
  StateId final_state = 0;
  std::vector<Int> z;
};

ParikhFormula parikh_formula(const TableAutomaton& a);

/// Reads the flow part of a model of `rho` (or of a formula containing it).
FlowModel flow_of(const ParikhFormula& rho, const IntAssignment& model);

/// Letter-count vectors of accepted letter sequences of length <= len.
/// Throws BoundExceeded when len > 12.
std::set<std::vector<std::size_t>> parikh_members_upto(const TableAutomaton& a, std::size_t len);

/// An accepted letter sequence using transition t exactly y[t] times, ending
/// in flow.final_state. Throws InvalidFlow when conservation or
/// connectivity fails.
std::vector<std::size_t> realize_path(const TableAutomaton& a, const FlowModel& flow);

}  // namespace sfacheck
