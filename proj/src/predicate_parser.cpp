#include <cctype>
#include <charconv>
#include <limits>

#include "sfacheck/algebra.hpp"
#include "sfacheck/errors.hpp"

namespace sfacheck {

namespace {

// Recursive descent over
//   expr := disj
//   disj := conj ("||" conj)*
//   conj := unary ("&&" unary)*
//   unary := "!" unary | "(" expr ")" | "true" | "false" | atom
// with integer atoms  [INT] ["*"] "x" [("+"|"-") INT] CMP INT  |  "x" "%" INT "==" INT
// and bitvector atoms "in" "{" INT ("," INT)* "}".
class PredicateParser {
 public:
  PredicateParser(std::string_view text, const AlgebraId& algebra) : text_(text), algebra_(algebra) {}

  Predicate parse() {
    Predicate p = disj();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, 0, pos_ + 1); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(std::string_view token) {
    skip_ws();
    return text_.substr(pos_, token.size()) == token;
  }

  bool accept(std::string_view token) {
    if (!peek(token)) return false;
    pos_ += token.size();
    return true;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  bool peek_keyword(std::string_view word) {
    if (!peek(word)) return false;
    std::size_t end = pos_ + word.size();
    return end == text_.size() || !(std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_');
  }

  bool accept_keyword(std::string_view word) {
    if (!peek_keyword(word)) return false;
    pos_ += word.size();
    return true;
  }

  Predicate disj() {
    Predicate p = conj();
    while (accept("||")) p = Predicate::disjunction(p, conj());
    return p;
  }

  Predicate conj() {
    Predicate p = unary();
    while (accept("&&")) p = Predicate::conjunction(p, unary());
    return p;
  }

  Predicate unary() {
    skip_ws();
    if (peek("!") && !peek("!=")) {
      ++pos_;
      return Predicate::negation(unary());
    }
    if (accept("(")) {
      Predicate p = disj();
      expect(")");
      return p;
    }
    if (accept_keyword("true")) return Predicate::top(algebra_);
    if (accept_keyword("false")) return Predicate::bottom(algebra_);
    if (algebra_.kind() == AlgebraId::Kind::bitvector) return bitset_atom();
    return integer_atom();
  }

  bool at_digit() {
    skip_ws();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  std::int64_t number() {
    skip_ws();
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
      skip_ws();
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    std::uint64_t magnitude = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, magnitude);
    (void)ptr;
    const std::uint64_t limit = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
    if (ec != std::errc() || magnitude > limit) {
      pos_ = start;
      fail("integer out of range");
    }
    auto v = static_cast<std::int64_t>(magnitude);
    return negative ? -v : v;
  }

  Cmp comparison() {
    skip_ws();
    if (accept("<=")) return Cmp::le;
    if (accept(">=")) return Cmp::ge;
    if (accept("==")) return Cmp::eq;
    if (accept("!=")) return Cmp::ne;
    if (accept("<")) return Cmp::lt;
    if (accept(">")) return Cmp::gt;
    fail("expected comparison operator");
  }

  static std::int64_t checked(__int128 v, PredicateParser& self) {
    if (v < std::numeric_limits<std::int64_t>::min() || v > std::numeric_limits<std::int64_t>::max())
      self.fail("constant out of range");
    return static_cast<std::int64_t>(v);
  }

  Predicate integer_atom() {
    skip_ws();
    std::size_t start = pos_;
    std::int64_t coef = 1;
    bool signed_x = false;
    if (peek("-") || peek("+")) {
      // "-x" or a signed coefficient
      std::size_t save = pos_;
      bool negative = text_[pos_] == '-';
      ++pos_;
      if (at_digit()) {
        pos_ = save;
        coef = number();
      } else {
        coef = negative ? -1 : 1;
        signed_x = true;
      }
    } else if (at_digit()) {
      coef = number();
    }
    bool had_coef = signed_x || pos_ != start;
    accept("*");
    if (!accept_keyword("x")) {
      // also accept the coefficient glued to x, as in "2x"
      if (!accept("x")) fail("expected 'x'");
    }
    if (!had_coef && accept("%")) {
      std::int64_t modulus = number();
      if (modulus < 1) fail("modulus must be positive");
      expect("==");
      std::int64_t residue = number();
      return Predicate::atom(algebra_, CongruenceAtom{modulus, residue});
    }
    __int128 offset = 0;
    skip_ws();
    if (peek("+") || peek("-")) {
      bool negative = text_[pos_] == '-';
      ++pos_;
      std::int64_t v = number();
      offset = negative ? -__int128{v} : __int128{v};
    }
    Cmp cmp = comparison();
    std::int64_t rhs = number();
    return Predicate::atom(algebra_, LinearAtom{coef, checked(offset - rhs, *this), cmp});
  }

  Predicate bitset_atom() {
    if (!accept_keyword("in")) fail("expected 'in', 'true' or 'false'");
    expect("{");
    std::vector<std::uint64_t> values;
    const unsigned width = algebra_.width();
    do {
      std::size_t at = pos_;
      std::int64_t v = number();
      if (v < 0 || static_cast<std::uint64_t>(v) >= (std::uint64_t{1} << width)) {
        pos_ = at;
        skip_ws();
        fail("value " + std::to_string(v) + " does not fit in " + std::to_string(width) + " bits");
      }
      values.push_back(static_cast<std::uint64_t>(v));
    } while (accept(","));
    expect("}");
    return Predicate::atom(algebra_, BitSetAtom{Bdd::from_values(width, values)});
  }

  std::string_view text_;
  AlgebraId algebra_;
  std::size_t pos_ = 0;
};

}  // namespace

Predicate parse_predicate(std::string_view text, const AlgebraId& algebra) {
  return PredicateParser(text, algebra).parse();
}

}  // namespace sfacheck
