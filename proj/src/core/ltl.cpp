#include "ltlgrid/ltl.hpp"

#include <cctype>
#include <charconv>

#include "ltlgrid/error.hpp"

namespace ltlgrid {

std::string AtomicPredicate::to_string() const {
  return "p" + std::to_string(robot) + "@" + region;
}

Formula::Formula() : Formula(make_true()) {}

Formula Formula::make(FormulaKind k, std::vector<Formula> children) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->children = std::move(children);
  return Formula(std::move(n));
}

Formula Formula::make_true() {
  static const Formula t = make(FormulaKind::True, {});
  return t;
}
Formula Formula::make_false() {
  static const Formula f = make(FormulaKind::False, {});
  return f;
}
Formula Formula::atom(AtomicPredicate ap) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Atom;
  n->ap = std::move(ap);
  return Formula(std::move(n));
}
Formula Formula::negation(Formula a) { return make(FormulaKind::Not, {std::move(a)}); }
Formula Formula::conjunction(Formula a, Formula b) { return make(FormulaKind::And, {std::move(a), std::move(b)}); }
Formula Formula::disjunction(Formula a, Formula b) { return make(FormulaKind::Or, {std::move(a), std::move(b)}); }
Formula Formula::next(Formula a) { return make(FormulaKind::Next, {std::move(a)}); }
Formula Formula::until(Formula a, Formula b) { return make(FormulaKind::Until, {std::move(a), std::move(b)}); }
Formula Formula::release(Formula a, Formula b) { return make(FormulaKind::Release, {std::move(a), std::move(b)}); }
Formula Formula::eventually(Formula a) { return make(FormulaKind::Eventually, {std::move(a)}); }
Formula Formula::always(Formula a) { return make(FormulaKind::Always, {std::move(a)}); }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == FormulaKind::Atom) return a.ap() == b.ap();
  if (a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!(a.child(i) == b.child(i))) return false;
  return true;
}

bool Formula::is_propositional() const {
  switch (kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
    case FormulaKind::Atom:
      return true;
    case FormulaKind::Not:
    case FormulaKind::And:
    case FormulaKind::Or:
      for (const auto& c : node_->children)
        if (!c.is_propositional()) return false;
      return true;
    default:
      return false;
  }
}

bool Formula::is_nnf() const {
  switch (kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
    case FormulaKind::Atom:
      return true;
    case FormulaKind::Not:
      return child(0).kind() == FormulaKind::Atom;
    case FormulaKind::Eventually:
    case FormulaKind::Always:
      return false;
    default:
      for (const auto& c : node_->children)
        if (!c.is_nnf()) return false;
      return true;
  }
}

Formula conjunction_of(const std::vector<Formula>& terms) {
  if (terms.empty()) return Formula::make_true();
  Formula acc = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) acc = Formula::conjunction(acc, terms[i]);
  return acc;
}

Formula disjunction_of(const std::vector<Formula>& terms) {
  if (terms.empty()) return Formula::make_false();
  Formula acc = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) acc = Formula::disjunction(acc, terms[i]);
  return acc;
}

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@';
}

bool is_label_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// returns nullopt-like robot 0 on malformed input; caller reports
bool split_atom(std::string_view word, int& robot, std::string& region, std::string& why) {
  if (word.size() < 4 || word[0] != 'p') {
    why = "expected atomic predicate p<j>@<region>";
    return false;
  }
  auto at = word.find('@');
  if (at == std::string_view::npos || at == 1) {
    why = "expected atomic predicate p<j>@<region>";
    return false;
  }
  auto digits = word.substr(1, at - 1);
  for (char c : digits)
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      why = "robot index must be a decimal number";
      return false;
    }
  auto label = word.substr(at + 1);
  if (label.empty()) {
    why = "empty region label";
    return false;
  }
  for (char c : label)
    if (!is_label_char(c)) {
      why = "invalid character in region label";
      return false;
    }
  auto res = std::from_chars(digits.data(), digits.data() + digits.size(), robot);
  if (res.ec != std::errc()) {
    why = "robot index out of range";
    return false;
  }
  if (robot == 0) {
    why = "robot index must be at least 1";
    return false;
  }
  region = std::string(label);
  return true;
}

enum class Tok { End, Word, Not, And, Or, Implies, LParen, RParen };

struct Token {
  Tok kind = Tok::End;
  std::string_view text;
  std::size_t offset = 0;
};

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& options) : text_(text), options_(options) { advance(); }

  Formula parse() {
    Formula f = implication();
    if (cur_.kind != Tok::End) fail("unexpected token '" + std::string(cur_.text) + "'", cur_.offset);
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t offset) {
    throw Error(ErrorCode::syntax, "offset " + std::to_string(offset) + ": " + msg, offset);
  }

  void advance() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
    cur_ = Token{};
    cur_.offset = pos_;
    if (pos_ >= text_.size()) return;
    char c = text_[pos_];
    auto single = [&](Tok k) {
      cur_.kind = k;
      cur_.text = text_.substr(pos_, 1);
      ++pos_;
    };
    switch (c) {
      case '!': single(Tok::Not); return;
      case '&': single(Tok::And); return;
      case '|': single(Tok::Or); return;
      case '(': single(Tok::LParen); return;
      case ')': single(Tok::RParen); return;
      case '-':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          cur_.kind = Tok::Implies;
          cur_.text = text_.substr(pos_, 2);
          pos_ += 2;
          return;
        }
        fail("expected '->'", pos_);
      default:
        break;
    }
    if (!is_word_char(c)) fail(std::string("unexpected character '") + c + "'", pos_);
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_word_char(text_[pos_])) ++pos_;
    cur_.kind = Tok::Word;
    cur_.text = text_.substr(start, pos_ - start);
  }

  bool word_is(std::string_view w) const { return cur_.kind == Tok::Word && cur_.text == w; }

  Formula implication() {
    Formula lhs = disjunction();
    if (cur_.kind == Tok::Implies) {
      advance();
      Formula rhs = implication();
      return Formula::disjunction(Formula::negation(lhs), rhs);
    }
    return lhs;
  }

  Formula disjunction() {
    Formula acc = conjunction();
    while (cur_.kind == Tok::Or) {
      advance();
      acc = Formula::disjunction(acc, conjunction());
    }
    return acc;
  }

  Formula conjunction() {
    Formula acc = binary_temporal();
    while (cur_.kind == Tok::And) {
      advance();
      acc = Formula::conjunction(acc, binary_temporal());
    }
    return acc;
  }

  Formula binary_temporal() {
    Formula lhs = unary();
    if (word_is("U")) {
      advance();
      return Formula::until(lhs, binary_temporal());
    }
    if (word_is("R")) {
      advance();
      return Formula::release(lhs, binary_temporal());
    }
    return lhs;
  }

  Formula unary() {
    if (cur_.kind == Tok::Not) {
      advance();
      return Formula::negation(unary());
    }
    if (word_is("X")) {
      advance();
      return Formula::next(unary());
    }
    if (word_is("F")) {
      advance();
      return Formula::eventually(unary());
    }
    if (word_is("G")) {
      advance();
      return Formula::always(unary());
    }
    return primary();
  }

  Formula primary() {
    if (cur_.kind == Tok::LParen) {
      std::size_t open = cur_.offset;
      advance();
      Formula inner = implication();
      if (cur_.kind != Tok::RParen) fail("missing ')' for '(' at offset " + std::to_string(open), cur_.offset);
      advance();
      return inner;
    }
    if (cur_.kind == Tok::End) fail("unexpected end of formula", cur_.offset);
    if (cur_.kind != Tok::Word) fail("unexpected token '" + std::string(cur_.text) + "'", cur_.offset);
    if (cur_.text == "true") {
      advance();
      return Formula::make_true();
    }
    if (cur_.text == "false") {
      advance();
      return Formula::make_false();
    }
    if (cur_.text == "U" || cur_.text == "R") fail("binary operator without left operand", cur_.offset);
    AtomicPredicate ap;
    std::string why;
    if (!split_atom(cur_.text, ap.robot, ap.region, why)) fail(why + " in '" + std::string(cur_.text) + "'", cur_.offset);
    if (options_.regions && ap.region != kObstacleRegion && !options_.regions->contains(ap.region))
      throw Error(ErrorCode::validation,
                  "offset " + std::to_string(cur_.offset) + ": unknown region '" + ap.region + "'", cur_.offset);
    advance();
    return Formula::atom(std::move(ap));
  }

  std::string_view text_;
  const ParseOptions& options_;
  std::size_t pos_ = 0;
  Token cur_;
};

void print(const Formula& f, std::string& out) {
  auto unary = [&](std::string_view op) {
    out += op;
    print(f.child(0), out);
  };
  auto binary = [&](std::string_view op) {
    out += '(';
    print(f.lhs(), out);
    out += op;
    print(f.rhs(), out);
    out += ')';
  };
  switch (f.kind()) {
    case FormulaKind::True: out += "true"; break;
    case FormulaKind::False: out += "false"; break;
    case FormulaKind::Atom: out += f.ap().to_string(); break;
    case FormulaKind::Not: unary("!"); break;
    case FormulaKind::Next: unary("X "); break;
    case FormulaKind::Eventually: unary("F "); break;
    case FormulaKind::Always: unary("G "); break;
    case FormulaKind::And: binary(" & "); break;
    case FormulaKind::Or: binary(" | "); break;
    case FormulaKind::Until: binary(" U "); break;
    case FormulaKind::Release: binary(" R "); break;
  }
}

Formula nnf(const Formula& f, bool neg) {
  switch (f.kind()) {
    case FormulaKind::True: return neg ? Formula::make_false() : f;
    case FormulaKind::False: return neg ? Formula::make_true() : f;
    case FormulaKind::Atom: return neg ? Formula::negation(f) : f;
    case FormulaKind::Not: return nnf(f.child(0), !neg);
    case FormulaKind::And:
      return neg ? Formula::disjunction(nnf(f.lhs(), true), nnf(f.rhs(), true))
                 : Formula::conjunction(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case FormulaKind::Or:
      return neg ? Formula::conjunction(nnf(f.lhs(), true), nnf(f.rhs(), true))
                 : Formula::disjunction(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case FormulaKind::Next: return Formula::next(nnf(f.child(0), neg));
    case FormulaKind::Until:
      return neg ? Formula::release(nnf(f.lhs(), true), nnf(f.rhs(), true))
                 : Formula::until(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case FormulaKind::Release:
      return neg ? Formula::until(nnf(f.lhs(), true), nnf(f.rhs(), true))
                 : Formula::release(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case FormulaKind::Eventually:
      return neg ? Formula::release(Formula::make_false(), nnf(f.child(0), true))
                 : Formula::until(Formula::make_true(), nnf(f.child(0), false));
    case FormulaKind::Always:
      return neg ? Formula::until(Formula::make_true(), nnf(f.child(0), true))
                 : Formula::release(Formula::make_false(), nnf(f.child(0), false));
  }
  return f;
}

void collect(const Formula& f, std::set<AtomicPredicate>& out) {
  if (f.kind() == FormulaKind::Atom) {
    out.insert(f.ap());
    return;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) collect(f.child(i), out);
}

}  // namespace

Formula parse_ltl(std::string_view text, const ParseOptions& options) {
  Parser p(text, options);
  return p.parse();
}

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

Formula to_nnf(const Formula& f) { return nnf(f, false); }

std::set<AtomicPredicate> atomic_predicates(const Formula& f) {
  std::set<AtomicPredicate> out;
  collect(f, out);
  return out;
}

AtomicPredicate parse_atomic_predicate(std::string_view text) {
  AtomicPredicate ap;
  std::string why;
  if (!split_atom(text, ap.robot, ap.region, why))
    throw Error(ErrorCode::syntax, why + " in '" + std::string(text) + "'", 0);
  return ap;
}

}  // namespace ltlgrid
