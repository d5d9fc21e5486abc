#pragma once

// HyperLTL formulas: AST, concrete syntax, and quantifier-prefix analysis.
//
// Concrete syntax (atoms are written prop@var):
//
//   formula := quant* body ;  quant := ("forall"|"exists") IDENT "." ;
//   body := iff ; iff := impl ("<->" impl)* ; impl := or ("->" or)* ;
//   or := and ("|" and)* ; and := unt ("&" unt)* ;
//   unt := un (("U"|"W") unt)? ; un := ("!"|"X"|"F"|"G") un | atom ;
//   atom := "true" | "false" | IDENT "@" IDENT | "(" body ")"
//
// "->" and "<->" associate to the right, "&" and "|" to the left.

#include "hypermon/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hypermon {

enum class Quantifier : std::uint8_t { Forall, Exists };

inline Quantifier flip(Quantifier q) noexcept {
  return q == Quantifier::Forall ? Quantifier::Exists : Quantifier::Forall;
}

inline const char* to_string(Quantifier q) noexcept {
  return q == Quantifier::Forall ? "forall" : "exists";
}

/// [A-Za-z_][A-Za-z0-9_]*
inline bool is_identifier(std::string_view s) noexcept {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  for (char c : s.substr(1)) {
    auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || u == '_')) return false;
  }
  return true;
}

/// Names starting with "__" are reserved for generated propositions.
inline bool is_reserved_name(std::string_view s) noexcept { return s.substr(0, 2) == "__"; }

/// Throws invalid_argument unless `name` may be used as a user proposition.
inline void validate_prop_name(std::string_view name) {
  if (!is_identifier(name))
    throw invalid_argument("invalid proposition name '" + std::string(name) + "'");
  if (is_reserved_name(name))
    throw invalid_argument("proposition name '" + std::string(name) + "' uses the reserved prefix '__'");
}

enum class LtlKind : std::uint8_t {
  True,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Next,
  Until,
  WeakUntil,
  Eventually,
  Globally,
};

inline bool is_binary(LtlKind k) noexcept {
  switch (k) {
  case LtlKind::And:
  case LtlKind::Or:
  case LtlKind::Implies:
  case LtlKind::Iff:
  case LtlKind::Until:
  case LtlKind::WeakUntil:
    return true;
  default:
    return false;
  }
}

inline bool is_unary(LtlKind k) noexcept {
  return k == LtlKind::Not || k == LtlKind::Next || k == LtlKind::Eventually ||
         k == LtlKind::Globally;
}

/// Immutable, structurally shared quantifier-free body. Derived operators
/// (->, <->, F, G, W) are kept as their own nodes; evaluators expand them.
class Ltl {
  struct Node {
    LtlKind kind;
    std::string prop;
    std::string var;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
    std::size_t hash = 0;
    std::size_t size = 1;
    std::size_t depth = 0;
  };

public:
  static Ltl top() { return Ltl(make(LtlKind::True, {}, {}, nullptr, nullptr)); }
  static Ltl bottom() { return neg(top()); }
  static Ltl atom(std::string prop, std::string var) {
    return Ltl(make(LtlKind::Atom, std::move(prop), std::move(var), nullptr, nullptr));
  }
  static Ltl neg(const Ltl& a) { return unary(LtlKind::Not, a); }
  static Ltl next(const Ltl& a) { return unary(LtlKind::Next, a); }
  static Ltl eventually(const Ltl& a) { return unary(LtlKind::Eventually, a); }
  static Ltl globally(const Ltl& a) { return unary(LtlKind::Globally, a); }
  static Ltl conj(const Ltl& a, const Ltl& b) { return binary(LtlKind::And, a, b); }
  static Ltl disj(const Ltl& a, const Ltl& b) { return binary(LtlKind::Or, a, b); }
  static Ltl implies(const Ltl& a, const Ltl& b) { return binary(LtlKind::Implies, a, b); }
  static Ltl iff(const Ltl& a, const Ltl& b) { return binary(LtlKind::Iff, a, b); }
  static Ltl until(const Ltl& a, const Ltl& b) { return binary(LtlKind::Until, a, b); }
  static Ltl weak_until(const Ltl& a, const Ltl& b) { return binary(LtlKind::WeakUntil, a, b); }

  static Ltl unary(LtlKind kind, const Ltl& a) {
    return Ltl(make(kind, {}, {}, a.node_, nullptr));
  }
  static Ltl binary(LtlKind kind, const Ltl& a, const Ltl& b) {
    return Ltl(make(kind, {}, {}, a.node_, b.node_));
  }

  /// Left-folded conjunction; `top()` when empty.
  static Ltl conj_all(const std::vector<Ltl>& xs) {
    if (xs.empty()) return top();
    Ltl acc = xs.front();
    for (std::size_t i = 1; i < xs.size(); ++i) acc = conj(acc, xs[i]);
    return acc;
  }
  /// Left-folded disjunction; `bottom()` when empty.
  static Ltl disj_all(const std::vector<Ltl>& xs) {
    if (xs.empty()) return bottom();
    Ltl acc = xs.front();
    for (std::size_t i = 1; i < xs.size(); ++i) acc = disj(acc, xs[i]);
    return acc;
  }

  LtlKind kind() const noexcept { return node_->kind; }
  const std::string& prop() const noexcept { return node_->prop; }
  const std::string& var() const noexcept { return node_->var; }
  Ltl lhs() const { return Ltl(node_->lhs); }
  Ltl rhs() const { return Ltl(node_->rhs); }

  /// Structural hash, stable across runs.
  std::size_t hash() const noexcept { return node_->hash; }
  std::size_t size() const noexcept { return node_->size; }
  /// Operator nesting depth; atoms and `true` have depth 0.
  std::size_t depth() const noexcept { return node_->depth; }

  /// Identity of the shared node, usable as a memo key while `*this` is alive.
  const void* id() const noexcept { return node_.get(); }

  friend bool operator==(const Ltl& a, const Ltl& b) { return equal(a.node_.get(), b.node_.get()); }
  friend bool operator!=(const Ltl& a, const Ltl& b) { return !(a == b); }

private:
  explicit Ltl(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::uint64_t mix(std::uint64_t h, std::uint64_t v) noexcept {
    // splitmix64 finalizer over the running value.
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return h;
  }

  static std::uint64_t hash_string(const std::string& s) noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    return h;
  }

  static std::shared_ptr<const Node> make(LtlKind kind, std::string prop, std::string var,
                                          std::shared_ptr<const Node> lhs,
                                          std::shared_ptr<const Node> rhs) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->prop = std::move(prop);
    n->var = std::move(var);
    std::uint64_t h = mix(0x5151, static_cast<std::uint64_t>(kind));
    if (kind == LtlKind::Atom) {
      h = mix(h, hash_string(n->prop));
      h = mix(h, hash_string(n->var));
    }
    if (lhs) {
      h = mix(h, lhs->hash);
      n->size += lhs->size;
      n->depth = lhs->depth + 1;
    }
    if (rhs) {
      h = mix(h, rhs->hash);
      n->size += rhs->size;
      n->depth = std::max(n->depth, rhs->depth + 1);
    }
    n->hash = static_cast<std::size_t>(h);
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->hash != b->hash || a->kind != b->kind || a->size != b->size) return false;
    if (a->kind == LtlKind::Atom) return a->prop == b->prop && a->var == b->var;
    return equal(a->lhs.get(), b->lhs.get()) && equal(a->rhs.get(), b->rhs.get());
  }

  std::shared_ptr<const Node> node_;
};

struct QuantifiedVar {
  Quantifier kind;
  std::string var;

  friend bool operator==(const QuantifiedVar&, const QuantifiedVar&) = default;
};

using QuantifierPrefix = std::vector<QuantifiedVar>;

/// Closed HyperLTL sentence: quantifier prefix followed by an LTL body.
struct HyperFormula {
  QuantifierPrefix prefix;
  Ltl body = Ltl::top();

  friend bool operator==(const HyperFormula& a, const HyperFormula& b) {
    return a.prefix == b.prefix && a.body == b.body;
  }
};

/// Trace variables referenced by atoms of `body`.
inline std::set<std::string> free_vars(const Ltl& body) {
  std::set<std::string> out;
  std::function<void(const Ltl&)> walk = [&](const Ltl& f) {
    if (f.kind() == LtlKind::Atom) {
      out.insert(f.var());
      return;
    }
    if (is_unary(f.kind())) walk(f.lhs());
    if (is_binary(f.kind())) {
      walk(f.lhs());
      walk(f.rhs());
    }
  };
  walk(body);
  return out;
}

/// Propositions referenced by atoms of `body`.
inline std::set<std::string> props_of(const Ltl& body) {
  std::set<std::string> out;
  std::function<void(const Ltl&)> walk = [&](const Ltl& f) {
    if (f.kind() == LtlKind::Atom) {
      out.insert(f.prop());
      return;
    }
    if (is_unary(f.kind())) walk(f.lhs());
    if (is_binary(f.kind())) {
      walk(f.lhs());
      walk(f.rhs());
    }
  };
  walk(body);
  return out;
}

/// Throws formula_error on an empty prefix, a duplicated quantifier variable,
/// or an atom over an unbound variable.
inline void validate(const HyperFormula& f) {
  if (f.prefix.empty()) throw formula_error("formula has no trace quantifier");
  std::set<std::string> bound;
  for (const auto& q : f.prefix) {
    if (!is_identifier(q.var)) throw formula_error("invalid trace variable '" + q.var + "'");
    if (!bound.insert(q.var).second)
      throw formula_error("duplicate quantifier variable '" + q.var + "'");
  }
  for (const auto& v : free_vars(f.body))
    if (!bound.count(v)) throw formula_error("unbound trace variable '" + v + "'");
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

enum class Tok : std::uint8_t {
  Ident,
  At,
  Dot,
  LParen,
  RParen,
  Bang,
  And,
  Or,
  Arrow,
  DArrow,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
        ++i;
      out.push_back({Tok::Ident, std::string(src.substr(start, i - start)), start});
      continue;
    }
    switch (c) {
    case '@': out.push_back({Tok::At, "@", i++}); continue;
    case '.': out.push_back({Tok::Dot, ".", i++}); continue;
    case '(': out.push_back({Tok::LParen, "(", i++}); continue;
    case ')': out.push_back({Tok::RParen, ")", i++}); continue;
    case '!': out.push_back({Tok::Bang, "!", i++}); continue;
    case '&': out.push_back({Tok::And, "&", i++}); continue;
    case '|': out.push_back({Tok::Or, "|", i++}); continue;
    case '-':
      if (src.substr(i, 2) == "->") {
        out.push_back({Tok::Arrow, "->", i});
        i += 2;
        continue;
      }
      break;
    case '<':
      if (src.substr(i, 3) == "<->") {
        out.push_back({Tok::DArrow, "<->", i});
        i += 3;
        continue;
      }
      break;
    default:
      break;
    }
    throw parse_error(std::string("unexpected character '") + c + "'", i);
  }
  out.push_back({Tok::End, "", src.size()});
  return out;
}

class Parser {
public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  HyperFormula formula() {
    HyperFormula f;
    while (peek_word("forall") || peek_word("exists")) {
      // "forall@p" would be an atom over a proposition named forall.
      if (toks_[pos_ + 1].kind == Tok::At) break;
      const Quantifier q = peek().text == "forall" ? Quantifier::Forall : Quantifier::Exists;
      ++pos_;
      const Token& v = expect(Tok::Ident, "trace variable");
      expect(Tok::Dot, "'.'");
      for (const auto& prev : f.prefix)
        if (prev.var == v.text)
          throw parse_error("duplicate quantifier variable '" + v.text + "'", v.offset);
      f.prefix.push_back({q, v.text});
    }
    if (f.prefix.empty())
      throw parse_error("formula has no trace quantifier", peek().offset, {"'forall'", "'exists'"});
    f.body = body();
    if (peek().kind != Tok::End)
      throw parse_error("unexpected token '" + peek().text + "'", peek().offset,
                        {"'U'", "'W'", "'&'", "'|'", "'->'", "'<->'", "end of input"});
    for (const auto& [var, offset] : atom_vars_) {
      bool bound = false;
      for (const auto& q : f.prefix) bound = bound || q.var == var;
      if (!bound) throw parse_error("unbound trace variable '" + var + "'", offset);
    }
    return f;
  }

  Ltl body_only() {
    Ltl b = body();
    if (peek().kind != Tok::End)
      throw parse_error("unexpected token '" + peek().text + "'", peek().offset, {"end of input"});
    return b;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  bool peek_word(std::string_view w) const {
    return peek().kind == Tok::Ident && peek().text == w;
  }
  bool next_is_at() const { return toks_[pos_ + 1].kind == Tok::At; }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind)
      throw parse_error(peek().kind == Tok::End ? "unexpected end of input"
                                                : "unexpected token '" + peek().text + "'",
                        peek().offset, {what});
    return toks_[pos_++];
  }

  Ltl body() { return iff(); }

  Ltl iff() {
    Ltl lhs = impl();
    if (peek().kind == Tok::DArrow) {
      ++pos_;
      return Ltl::iff(lhs, iff());
    }
    return lhs;
  }

  Ltl impl() {
    Ltl lhs = disj();
    if (peek().kind == Tok::Arrow) {
      ++pos_;
      return Ltl::implies(lhs, impl());
    }
    return lhs;
  }

  Ltl disj() {
    Ltl acc = conj();
    while (peek().kind == Tok::Or) {
      ++pos_;
      acc = Ltl::disj(acc, conj());
    }
    return acc;
  }

  Ltl conj() {
    Ltl acc = unt();
    while (peek().kind == Tok::And) {
      ++pos_;
      acc = Ltl::conj(acc, unt());
    }
    return acc;
  }

  Ltl unt() {
    Ltl lhs = un();
    if ((peek_word("U") || peek_word("W")) && !next_is_at()) {
      const bool strong = peek().text == "U";
      ++pos_;
      Ltl rhs = unt();
      return strong ? Ltl::until(lhs, rhs) : Ltl::weak_until(lhs, rhs);
    }
    return lhs;
  }

  Ltl un() {
    if (peek().kind == Tok::Bang) {
      ++pos_;
      return Ltl::neg(un());
    }
    if (peek().kind == Tok::Ident && !next_is_at()) {
      const std::string& w = peek().text;
      if (w == "X" || w == "F" || w == "G") {
        const LtlKind k = w == "X" ? LtlKind::Next : w == "F" ? LtlKind::Eventually : LtlKind::Globally;
        ++pos_;
        return Ltl::unary(k, un());
      }
    }
    return atom();
  }

  Ltl atom() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      ++pos_;
      Ltl inner = body();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind == Tok::Ident) {
      if (!next_is_at()) {
        if (t.text == "true") {
          ++pos_;
          return Ltl::top();
        }
        if (t.text == "false") {
          ++pos_;
          return Ltl::bottom();
        }
      }
      ++pos_;
      if (is_reserved_name(t.text))
        throw parse_error("proposition '" + t.text + "' uses the reserved prefix '__'", t.offset);
      expect(Tok::At, "'@'");
      const Token& v = expect(Tok::Ident, "trace variable");
      atom_vars_.emplace_back(v.text, v.offset);
      return Ltl::atom(t.text, v.text);
    }
    throw parse_error(t.kind == Tok::End ? "unexpected end of input"
                                         : "unexpected token '" + t.text + "'",
                      t.offset, {"'('", "'!'", "'X'", "'F'", "'G'", "'true'", "'false'", "prop@var"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::pair<std::string, std::size_t>> atom_vars_;
};

} // namespace detail

/// Parses user-supplied formula text. Propositions with the reserved "__"
/// prefix are rejected; generated indexed names such as `q__1` are accepted.
inline HyperFormula parse_formula(std::string_view text) {
  return detail::Parser(text).formula();
}

/// Parses a quantifier-free body (atoms may reference any variable).
inline Ltl parse_body(std::string_view text) { return detail::Parser(text).body_only(); }

// ---------------------------------------------------------------------------
// Formatting

inline std::string format_body(const Ltl& f) {
  switch (f.kind()) {
  case LtlKind::True: return "true";
  case LtlKind::Atom: return f.prop() + "@" + f.var();
  case LtlKind::Not: return "!" + format_body(f.lhs());
  case LtlKind::Next: return "X " + format_body(f.lhs());
  case LtlKind::Eventually: return "F " + format_body(f.lhs());
  case LtlKind::Globally: return "G " + format_body(f.lhs());
  default: break;
  }
  const char* op = "";
  switch (f.kind()) {
  case LtlKind::And: op = " & "; break;
  case LtlKind::Or: op = " | "; break;
  case LtlKind::Implies: op = " -> "; break;
  case LtlKind::Iff: op = " <-> "; break;
  case LtlKind::Until: op = " U "; break;
  case LtlKind::WeakUntil: op = " W "; break;
  default: break;
  }
  return "(" + format_body(f.lhs()) + op + format_body(f.rhs()) + ")";
}

/// Canonical fully parenthesized text; `parse_formula` inverts it exactly.
inline std::string format_formula(const HyperFormula& f) {
  std::string out;
  for (const auto& q : f.prefix) {
    out += to_string(q.kind);
    out += ' ';
    out += q.var;
    out += ". ";
  }
  return out + format_body(f.body);
}

// ---------------------------------------------------------------------------
// Classification

enum class Pattern : std::uint8_t { ExistsOnly, ForallOnly, EA, AE };

struct FragmentClass {
  Pattern pattern;
  /// Number of adjacent quantifier-kind switches in the prefix.
  std::size_t alternation_depth;

  bool alternation_free() const noexcept { return alternation_depth == 0; }
  friend bool operator==(const FragmentClass&, const FragmentClass&) = default;
};

inline FragmentClass classify(const QuantifierPrefix& prefix) {
  if (prefix.empty()) throw formula_error("formula has no trace quantifier");
  std::size_t switches = 0;
  for (std::size_t i = 1; i < prefix.size(); ++i)
    if (prefix[i].kind != prefix[i - 1].kind) ++switches;
  const bool lead_exists = prefix.front().kind == Quantifier::Exists;
  if (switches == 0) return {lead_exists ? Pattern::ExistsOnly : Pattern::ForallOnly, 0};
  return {lead_exists ? Pattern::EA : Pattern::AE, switches};
}

inline FragmentClass classify(const HyperFormula& f) { return classify(f.prefix); }

/// "exists-only", "forall-only", "(EA)k" or "(AE)k" with k spelled out.
inline std::string to_string(const FragmentClass& c) {
  switch (c.pattern) {
  case Pattern::ExistsOnly: return "exists-only";
  case Pattern::ForallOnly: return "forall-only";
  case Pattern::EA: return "(EA)" + std::to_string(c.alternation_depth);
  case Pattern::AE: return "(AE)" + std::to_string(c.alternation_depth);
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Duality

/// Flips every quantifier and negates the body, so T |= f iff not T |= dualize(f).
inline HyperFormula dualize(const HyperFormula& f) {
  HyperFormula g;
  g.prefix.reserve(f.prefix.size());
  for (const auto& q : f.prefix) g.prefix.push_back({flip(q.kind), q.var});
  g.body = Ltl::neg(f.body);
  return g;
}

/// Removes every `!!x` pair.
inline Ltl strip_double_negation(const Ltl& f) {
  if (f.kind() == LtlKind::Not && f.lhs().kind() == LtlKind::Not)
    return strip_double_negation(f.lhs().lhs());
  if (f.kind() == LtlKind::True || f.kind() == LtlKind::Atom) return f;
  if (is_unary(f.kind())) return Ltl::unary(f.kind(), strip_double_negation(f.lhs()));
  return Ltl::binary(f.kind(), strip_double_negation(f.lhs()), strip_double_negation(f.rhs()));
}

/// Replaces atoms via `fn(prop, var) -> Ltl`.
template <class Fn>
Ltl map_atoms(const Ltl& f, Fn&& fn) {
  switch (f.kind()) {
  case LtlKind::True: return f;
  case LtlKind::Atom: return fn(f.prop(), f.var());
  default: break;
  }
  if (is_unary(f.kind())) return Ltl::unary(f.kind(), map_atoms(f.lhs(), fn));
  return Ltl::binary(f.kind(), map_atoms(f.lhs(), fn), map_atoms(f.rhs(), fn));
}

} // namespace hypermon

template <>
struct std::hash<hypermon::Ltl> {
  std::size_t operator()(const hypermon::Ltl& f) const noexcept { return f.hash(); }
};
