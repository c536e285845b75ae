#include "sfacheck/sfa_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sfacheck/errors.hpp"

namespace sfacheck {

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
  bool quoted = false;
};

bool is_ident(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

// Guard grammar: disj := conj ("|" conj)*, conj := unary ("&" unary)*,
// unary := "!" unary | "(" disj ")" | "true" | "false" | NAME.
class GuardParser {
 public:
  GuardParser(std::string_view text, std::size_t line, std::size_t column0, const AlgebraId& algebra,
              const std::map<std::string, Predicate>& preds)
      : text_(text), line_(line), column0_(column0), algebra_(algebra), preds_(preds) {}

  Predicate parse() {
    Predicate p = disj();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "' in guard");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& message) { throw ParseError(message, line_, column0_ + pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      // tolerate the doubled spellings "&&" and "||"
      if ((c == '&' || c == '|') && pos_ < text_.size() && text_[pos_] == c) ++pos_;
      return true;
    }
    return false;
  }

  Predicate disj() {
    Predicate p = conj();
    while (accept('|')) p = Predicate::disjunction(p, conj());
    return p;
  }

  Predicate conj() {
    Predicate p = unary();
    while (accept('&')) p = Predicate::conjunction(p, unary());
    return p;
  }

  Predicate unary() {
    if (accept('!')) return Predicate::negation(unary());
    if (accept('(')) {
      Predicate p = disj();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    std::string word(text_.substr(start, pos_ - start));
    if (word.empty()) fail("expected predicate name");
    if (word == "true") return Predicate::top(algebra_);
    if (word == "false") return Predicate::bottom(algebra_);
    auto it = preds_.find(word);
    if (it == preds_.end()) {
      pos_ = start;
      throw SemanticError("line " + std::to_string(line_) + ": unknown predicate '" + word + "'");
    }
    return it->second;
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t column0_;
  const AlgebraId& algebra_;
  const std::map<std::string, Predicate>& preds_;
  std::size_t pos_ = 0;
};

// Splits a line into words and quoted strings, dropping a trailing comment.
std::vector<Token> tokenize(const std::string& line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') break;
    if (c == '"') {
      std::size_t start = i++;
      std::string text;
      while (i < line.size() && line[i] != '"') {
        if (line[i] == '\\' && i + 1 < line.size()) ++i;
        text += line[i++];
      }
      if (i == line.size()) throw ParseError("unterminated string", line_no, start + 1);
      ++i;
      out.push_back({text, start + 2, true});
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#' && line[i] != '"') ++i;
    out.push_back({line.substr(start, i - start), start + 1, false});
  }
  return out;
}

ParseError relocate(const ParseError& e, std::size_t line, std::size_t column0) {
  std::string msg = e.what();
  auto colon = msg.find(": ");
  if (colon != std::string::npos) msg = msg.substr(colon + 2);
  return ParseError(msg, line, column0 + e.column() - 1);
}

}  // namespace

SfaFile parse_sfa_file(std::string_view text) {
  std::optional<AlgebraId> algebra;
  std::vector<PredDecl> preds;
  std::map<std::string, Predicate> pred_by_name;
  std::vector<std::string> states;
  std::map<std::string, StateId> state_index;
  std::optional<StateId> initial;
  std::vector<StateId> accepting;
  std::vector<Transition> transitions;
  std::optional<std::string> card_text;
  std::size_t card_line = 0, card_column = 0;

  auto state = [&](const Token& t, std::size_t line) {
    auto it = state_index.find(t.text);
    if (it == state_index.end())
      throw SemanticError("line " + std::to_string(line) + ": unknown state '" + t.text + "'");
    return it->second;
  };
  auto need_algebra = [&](std::size_t line) {
    if (!algebra) throw SemanticError("line " + std::to_string(line) + ": 'algebra' must come first");
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto toks = tokenize(raw, line_no);
    if (toks.empty()) continue;
    const std::string& kw = toks[0].text;
    auto arity = [&](std::size_t n) {
      if (toks.size() != n)
        throw ParseError("'" + kw + "' expects " + std::to_string(n - 1) + " argument(s)", line_no,
                         toks.size() > n ? toks[n].column : raw.size() + 1);
    };
    if (kw == "algebra") {
      if (algebra) throw SemanticError("line " + std::to_string(line_no) + ": algebra declared twice");
      if (toks.size() >= 2 && toks[1].text == "lia") {
        arity(2);
        algebra = AlgebraId::integer();
      } else if (toks.size() >= 2 && toks[1].text == "bv") {
        arity(3);
        const std::string& w = toks[2].text;
        if (w.empty() || w.size() > 4 || !std::all_of(w.begin(), w.end(), ::isdigit))
          throw ParseError("expected bit width", line_no, toks[2].column);
        algebra = AlgebraId::bitvector(static_cast<unsigned>(std::stoul(w)));
      } else {
        throw ParseError("expected 'lia' or 'bv WIDTH'", line_no, toks.size() > 1 ? toks[1].column : raw.size() + 1);
      }
    } else if (kw == "pred") {
      need_algebra(line_no);
      arity(3);
      if (!is_ident(toks[1].text) || toks[1].quoted)
        throw ParseError("expected predicate name", line_no, toks[1].column);
      if (!toks[2].quoted) throw ParseError("expected quoted predicate", line_no, toks[2].column);
      const std::string& name = toks[1].text;
      static const std::set<std::string> reserved{"true", "false", "U",   "or",       "and",
                                                  "not",  "sub",   "dvd", "subseteq", "empty"};
      if (reserved.count(name))
        throw SemanticError("line " + std::to_string(line_no) + ": reserved predicate name '" + name + "'");
      if (pred_by_name.count(name))
        throw SemanticError("line " + std::to_string(line_no) + ": predicate '" + name + "' declared twice");
      Predicate body = Predicate::top(*algebra);
      try {
        body = parse_predicate(toks[2].text, *algebra);
      } catch (const ParseError& e) {
        throw relocate(e, line_no, toks[2].column);
      }
      Predicate p = Predicate::named(name, body);
      preds.push_back({name, toks[2].text, p});
      pred_by_name.emplace(name, p);
    } else if (kw == "states") {
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (!is_ident(toks[i].text)) throw ParseError("expected state name", line_no, toks[i].column);
        if (state_index.count(toks[i].text))
          throw SemanticError("line " + std::to_string(line_no) + ": state '" + toks[i].text + "' declared twice");
        state_index.emplace(toks[i].text, states.size());
        states.push_back(toks[i].text);
      }
    } else if (kw == "initial") {
      arity(2);
      if (initial) throw SemanticError("line " + std::to_string(line_no) + ": initial state declared twice");
      initial = state(toks[1], line_no);
    } else if (kw == "accepting") {
      for (std::size_t i = 1; i < toks.size(); ++i) accepting.push_back(state(toks[i], line_no));
    } else if (kw == "trans") {
      need_algebra(line_no);
      if (toks.size() < 4) throw ParseError("'trans' expects SOURCE TARGET GUARD", line_no, raw.size() + 1);
      StateId s = state(toks[1], line_no);
      StateId t = state(toks[2], line_no);
      // the guard is the rest of the line up to a comment
      std::size_t start = toks[3].column - 1;
      std::size_t end = raw.find('#', start);
      std::string guard_text = raw.substr(start, end == std::string::npos ? std::string::npos : end - start);
      Predicate g = GuardParser(guard_text, line_no, start + 1, *algebra, pred_by_name).parse();
      transitions.push_back({s, g, t});
    } else if (kw == "cardinality") {
      need_algebra(line_no);
      arity(2);
      if (!toks[1].quoted) throw ParseError("expected quoted formula", line_no, toks[1].column);
      if (card_text) throw SemanticError("line " + std::to_string(line_no) + ": cardinality declared twice");
      card_text = toks[1].text;
      card_line = line_no;
      card_column = toks[1].column;
    } else {
      throw ParseError("unknown directive '" + kw + "'", line_no, toks[0].column);
    }
  }

  if (!algebra) throw SemanticError("missing 'algebra' declaration");
  if (states.empty()) throw SemanticError("missing 'states' declaration");
  if (!initial) throw SemanticError("missing 'initial' declaration");

  std::vector<Predicate> declared;
  for (const auto& p : preds) declared.push_back(p.predicate);
  Sfa sfa(*algebra, states, *initial, accepting, transitions, declared);

  std::optional<CardinalityConstraint> card;
  if (card_text) {
    std::set<std::string> names;
    for (const auto& p : preds) names.insert(p.name);
    CardinalityConstraint c;
    try {
      c.formula = parse_bapa(*card_text, names);
    } catch (const ParseError& e) {
      throw relocate(e, card_line, card_column);
    }
    for (const auto& p : preds) c.bindings.emplace(p.name, p.predicate);
    card = std::move(c);
  }
  return SfaFile{*algebra, std::move(preds), std::move(sfa), card_text, std::move(card)};
}

SfaFile load_sfa_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_sfa_file(ss.str());
}

std::string guard_to_string(const Predicate& p) {
  switch (p.kind()) {
    case Predicate::Kind::top:
      return "true";
    case Predicate::Kind::bottom:
      return "false";
    case Predicate::Kind::named:
      return p.name();
    case Predicate::Kind::atom:
      return "(" + to_string(p) + ")";
    case Predicate::Kind::negation: {
      const Predicate& c = p.children()[0];
      std::string inner = guard_to_string(c);
      return "!" + inner;
    }
    case Predicate::Kind::conjunction:
      return "(" + guard_to_string(p.children()[0]) + " & " + guard_to_string(p.children()[1]) + ")";
    case Predicate::Kind::disjunction:
      return "(" + guard_to_string(p.children()[0]) + " | " + guard_to_string(p.children()[1]) + ")";
  }
  return {};
}

std::string print_sfa_file(const SfaFile& f) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream os;
  if (f.algebra.kind() == AlgebraId::Kind::integer) {
    os << "algebra lia\n";
  } else {
    os << "algebra bv " << f.algebra.width() << "\n";
  }
  for (const auto& p : f.preds) os << "pred " << p.name << " " << quote(p.text) << "\n";
  const Sfa& m = f.sfa;
  os << "states";
  for (const auto& s : m.state_names()) os << " " << s;
  os << "\ninitial " << m.state_names()[m.initial()] << "\n";
  os << "accepting";
  for (StateId q : m.accepting_states()) os << " " << m.state_names()[q];
  os << "\n";
  for (const auto& t : m.transitions())
    os << "trans " << m.state_names()[t.source] << " " << m.state_names()[t.target] << " "
       << guard_to_string(t.guard) << "\n";
  if (f.cardinality_text) os << "cardinality " << quote(*f.cardinality_text) << "\n";
  return os.str();
}

}  // namespace sfacheck
