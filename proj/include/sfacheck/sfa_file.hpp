#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfacheck/decide.hpp"
#include "sfacheck/sfa.hpp"

namespace sfacheck {

struct PredDecl {
  std::string name;
  std::string text;
  /// Predicate::named(name, body).
  Predicate predicate;
};

struct SfaFile {
  AlgebraId algebra;
  std::vector<PredDecl> preds;
  Sfa sfa;
  std::optional<std::string> cardinality_text;
  std::optional<CardinalityConstraint> cardinality;
};

/// Parses the line-oriented automaton format. Throws ParseError (with line
/// and column) and SemanticError.
SfaFile parse_sfa_file(std::string_view text);

/// Reads and parses a file; throws Error when it cannot be read.
SfaFile load_sfa_file(const std::string& path);

/// Canonical text; parse_sfa_file(print_sfa_file(f)) rebuilds f.
std::string print_sfa_file(const SfaFile& f);

/// Guard text over declared predicate names.
std::string guard_to_string(const Predicate& p);

}  // namespace sfacheck
