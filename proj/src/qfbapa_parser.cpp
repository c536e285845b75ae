#include <cctype>

#include "sfacheck/errors.hpp"
#include "sfacheck/qfbapa.hpp"

namespace sfacheck {

namespace {

// formula := conj (("or" | "||") conj)*
// conj    := unary (("&" | "&&" | "and") unary)*
// unary   := ("!" | "not") unary | "true" | "false" | "(" formula ")" | atom
// atom    := INT "dvd" term | set ("=" | "sub" | "subseteq") set | term CMP term
// term    := summand (("+" | "-") summand)*
// summand := "-" summand | INT ["*" factor] | factor
// factor  := "|" set "|" | IDENT | INT | "(" term ")"
// set     := inter ("+" inter)*
// inter   := setatom ("&" setatom)*      (only inside bars or parentheses)
// setatom := "~" setatom | "U" | "empty" | "{}" | SETVAR | "(" set ")"
class BapaParser {
 public:
  BapaParser(std::string_view text, const std::optional<std::set<std::string>>& set_vars)
      : text_(text), set_vars_(set_vars) {}

  BapaFormula parse() {
    BapaFormula f = formula();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  struct Failure {
    std::size_t pos;
    std::string message;
  };

  [[noreturn]] void fail(const std::string& message) {
    if (!furthest_ || pos_ >= furthest_->pos) furthest_ = Failure{pos_, message};
    throw ParseError(message, 0, pos_ + 1);
  }

  // Runs `fn` and rewinds on failure.
  template <class F>
  auto attempt(F fn) -> std::optional<decltype(fn())> {
    std::size_t save = pos_;
    try {
      return fn();
    } catch (const ParseError&) {
      pos_ = save;
      return std::nullopt;
    }
  }

  [[noreturn]] void fail_furthest() {
    pos_ = furthest_ ? furthest_->pos : pos_;
    throw ParseError(furthest_ ? furthest_->message : "syntax error", 0, pos_ + 1);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(std::string_view tok) {
    skip_ws();
    return text_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  bool peek_keyword(std::string_view word) {
    if (!peek(word)) return false;
    std::size_t end = pos_ + word.size();
    return end == text_.size() || !ident_char(text_[end]);
  }

  bool accept_keyword(std::string_view word) {
    if (!peek_keyword(word)) return false;
    pos_ += word.size();
    return true;
  }

  std::optional<std::string> peek_ident() {
    skip_ws();
    if (pos_ >= text_.size()) return std::nullopt;
    char c = text_[pos_];
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) return std::nullopt;
    std::size_t end = pos_;
    while (end < text_.size() && ident_char(text_[end])) ++end;
    return std::string(text_.substr(pos_, end - pos_));
  }

  static bool reserved(const std::string& w) {
    return w == "or" || w == "and" || w == "not" || w == "true" || w == "false" || w == "sub" ||
           w == "subseteq" || w == "dvd" || w == "empty" || w == "U";
  }

  bool is_set_var(const std::string& w) const {
    if (w == "U") return false;
    if (set_vars_) return set_vars_->count(w) > 0;
    return std::isupper(static_cast<unsigned char>(w[0]));
  }

  Int integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return Int(std::string(text_.substr(start, pos_ - start)));
  }

  bool at_digit() {
    skip_ws();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  // -- formulas

  BapaFormula formula() {
    BapaFormula f = conj();
    for (;;) {
      if (accept("||") || accept_keyword("or")) {
        f = BapaFormula::disjunction(f, conj());
      } else {
        return f;
      }
    }
  }

  BapaFormula conj() {
    BapaFormula f = unary();
    for (;;) {
      if (accept("&&") || accept("&") || accept_keyword("and")) {
        f = BapaFormula::conjunction(f, unary());
      } else {
        return f;
      }
    }
  }

  BapaFormula unary() {
    skip_ws();
    if (peek("!") && !peek("!=")) {
      ++pos_;
      return BapaFormula::negation(unary());
    }
    if (accept_keyword("not")) return BapaFormula::negation(unary());
    if (accept_keyword("true")) return BapaFormula::truth();
    if (accept_keyword("false")) return BapaFormula::falsity();
    if (peek("(")) {
      auto f = attempt([&] {
        expect("(");
        BapaFormula inner = formula();
        expect(")");
        // "(x + 1) = 2" reads a parenthesized term, not a formula
        skip_ws();
        if (pos_ < text_.size() && std::string_view("=<>!+-*").find(text_[pos_]) != std::string_view::npos &&
            !peek("||")) {
          fail("parenthesized formula used as a term");
        }
        if (peek_keyword("sub") || peek_keyword("subseteq")) fail("parenthesized formula used as a set");
        return inner;
      });
      if (f) return *f;
    }
    return atom();
  }

  BapaFormula atom() {
    if (at_digit()) {
      auto d = attempt([&] {
        Int k = integer();
        if (!accept_keyword("dvd")) fail("expected 'dvd'");
        return BapaFormula::dvd(k, term());
      });
      if (d) return *d;
    }
    if (auto s = attempt([&] { return set_atom(); })) return *s;
    if (auto t = attempt([&] { return int_atom(); })) return *t;
    fail_furthest();
  }

  BapaFormula set_atom() {
    SetExpr a = set(false);
    if (accept_keyword("subseteq") || accept_keyword("sub")) return BapaFormula::subset(a, set(false));
    if (peek("==") || (peek("=") && !peek("=="))) {
      accept("==") || accept("=");
      return BapaFormula::set_eq(a, set(false));
    }
    fail("expected '=' or 'sub'");
  }

  BapaFormula int_atom() {
    BapaTerm a = term();
    skip_ws();
    if (accept("<=")) return BapaFormula::le(a, term());
    if (accept(">=")) return BapaFormula::le(term(), a);
    if (accept("!=")) return BapaFormula::negation(BapaFormula::eq(a, term()));
    if (accept("==") || accept("=")) return BapaFormula::eq(a, term());
    if (accept("<")) return BapaFormula::le(BapaTerm::sum(a, BapaTerm::constant(1)), term());
    if (accept(">")) return BapaFormula::le(BapaTerm::sum(term(), BapaTerm::constant(1)), a);
    fail("expected comparison operator");
  }

  // -- terms

  BapaTerm term() {
    BapaTerm t = summand();
    for (;;) {
      if (accept("+")) {
        t = BapaTerm::sum(t, summand());
      } else if (peek("-")) {
        ++pos_;
        t = BapaTerm::sum(t, BapaTerm::scale(Int(-1), summand()));
      } else {
        return t;
      }
    }
  }

  BapaTerm summand() {
    if (accept("-")) {
      skip_ws();
      if (at_digit()) {
        Int k = integer();
        if (accept("*")) return BapaTerm::scale(-k, factor());
        return BapaTerm::constant(-k);
      }
      return BapaTerm::scale(Int(-1), summand());
    }
    if (at_digit()) {
      Int k = integer();
      if (accept("*")) return BapaTerm::scale(k, factor());
      return BapaTerm::constant(k);
    }
    return factor();
  }

  BapaTerm factor() {
    skip_ws();
    if (accept("|")) {
      SetExpr s = set(true);
      expect("|");
      return BapaTerm::card(s);
    }
    if (accept("(")) {
      BapaTerm t = term();
      expect(")");
      return t;
    }
    if (at_digit()) return BapaTerm::constant(integer());
    auto w = peek_ident();
    if (!w || reserved(*w) || is_set_var(*w)) fail("expected integer term");
    pos_ += w->size();
    return BapaTerm::var(*w);
  }

  // -- sets

  SetExpr set(bool allow_inter) {
    SetExpr s = inter(allow_inter);
    while (accept("+")) s = SetExpr::set_union(s, inter(allow_inter));
    return s;
  }

  SetExpr inter(bool allow_inter) {
    SetExpr s = set_atom_expr();
    while (allow_inter && peek("&") && !peek("&&")) {
      ++pos_;
      s = SetExpr::intersection(s, set_atom_expr());
    }
    return s;
  }

  SetExpr set_atom_expr() {
    skip_ws();
    if (accept("~")) return SetExpr::complement(set_atom_expr());
    if (accept("{}")) return SetExpr::empty();
    if (accept("(")) {
      SetExpr s = set(true);
      expect(")");
      return s;
    }
    if (accept_keyword("U")) return SetExpr::universe();
    if (accept_keyword("empty")) return SetExpr::empty();
    auto w = peek_ident();
    if (!w || !is_set_var(*w)) fail("expected set expression");
    pos_ += w->size();
    return SetExpr::var(*w);
  }

  std::string_view text_;
  const std::optional<std::set<std::string>>& set_vars_;
  std::size_t pos_ = 0;
  std::optional<Failure> furthest_;
};

}  // namespace

BapaFormula parse_bapa(std::string_view text, const std::optional<std::set<std::string>>& set_vars) {
  return BapaParser(text, set_vars).parse();
}

}  // namespace sfacheck
