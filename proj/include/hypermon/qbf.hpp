#pragma once

// Quantified Boolean formulas: representation, exhaustive game-tree solver and
// a seeded random CNF generator.

#include "hypermon/error.hpp"
#include "hypermon/formula.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace hypermon {

struct Literal {
  std::size_t var; ///< index into Qbf::vars
  bool positive = true;
  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;
using Cnf = std::vector<Clause>;

/// Arbitrary Boolean expression over QBF variable indices.
struct BoolExpr {
  enum class Kind : std::uint8_t { Const, Var, Not, And, Or };

  Kind kind = Kind::Const;
  bool value = false;
  std::size_t var = 0;
  std::vector<BoolExpr> args;

  static BoolExpr constant(bool v) { return {Kind::Const, v, 0, {}}; }
  static BoolExpr variable(std::size_t v) { return {Kind::Var, false, v, {}}; }
  static BoolExpr negation(BoolExpr a) { return {Kind::Not, false, 0, {std::move(a)}}; }
  static BoolExpr conjunction(std::vector<BoolExpr> xs) { return {Kind::And, false, 0, std::move(xs)}; }
  static BoolExpr disjunction(std::vector<BoolExpr> xs) { return {Kind::Or, false, 0, std::move(xs)}; }

  /// `assignment` bit i is the value of variable i.
  bool eval(std::uint64_t assignment) const {
    switch (kind) {
    case Kind::Const: return value;
    case Kind::Var: return (assignment >> var) & 1U;
    case Kind::Not: return !args.front().eval(assignment);
    case Kind::And:
      for (const auto& a : args)
        if (!a.eval(assignment)) return false;
      return true;
    case Kind::Or:
      for (const auto& a : args)
        if (a.eval(assignment)) return true;
      return false;
    }
    return false;
  }
};

inline BoolExpr to_expr(const Cnf& cnf) {
  std::vector<BoolExpr> clauses;
  for (const auto& c : cnf) {
    std::vector<BoolExpr> lits;
    for (const auto& l : c) {
      auto v = BoolExpr::variable(l.var);
      lits.push_back(l.positive ? std::move(v) : BoolExpr::negation(std::move(v)));
    }
    clauses.push_back(BoolExpr::disjunction(std::move(lits)));
  }
  return BoolExpr::conjunction(std::move(clauses));
}

struct QbfVar {
  std::string name;
  Quantifier kind;
};

/// Prefix Q_1 x_1 ... Q_n x_n over a CNF or an arbitrary Boolean body.
struct Qbf {
  std::vector<QbfVar> vars;
  std::variant<Cnf, BoolExpr> body;

  bool is_cnf() const noexcept { return std::holds_alternative<Cnf>(body); }
  const Cnf& cnf() const {
    if (!is_cnf()) throw invalid_argument("QBF body is not in CNF");
    return std::get<Cnf>(body);
  }
  BoolExpr expr() const { return is_cnf() ? to_expr(std::get<Cnf>(body)) : std::get<BoolExpr>(body); }
};

/// d(x_i): 1 for the first quantifier block, incremented at every switch.
inline std::vector<std::size_t> alternation_depths(const Qbf& q) {
  std::vector<std::size_t> d(q.vars.size());
  for (std::size_t i = 0; i < q.vars.size(); ++i)
    d[i] = i == 0 ? 1 : d[i - 1] + (q.vars[i].kind != q.vars[i - 1].kind ? 1 : 0);
  return d;
}

/// Number of quantifier alternations (blocks - 1); 0 for an empty prefix.
inline std::size_t qbf_alternations(const Qbf& q) {
  const auto d = alternation_depths(q);
  return d.empty() ? 0 : d.back() - 1;
}

/// Throws invalid_argument on out-of-range literals or a clause mentioning a
/// variable twice.
inline void validate(const Qbf& q) {
  if (!q.is_cnf()) return;
  for (const auto& c : q.cnf()) {
    for (std::size_t a = 0; a < c.size(); ++a) {
      if (c[a].var >= q.vars.size()) throw invalid_argument("literal references unknown variable");
      for (std::size_t b = a + 1; b < c.size(); ++b)
        if (c[a].var == c[b].var)
          throw invalid_argument("variable " + q.vars[c[a].var].name + " occurs twice in one clause");
    }
  }
}

inline constexpr std::size_t kMaxQbfVars = 20;

/// Truth value by exhaustive recursion over the prefix.
inline bool qbf_solve(const Qbf& q) {
  if (q.vars.size() > kMaxQbfVars)
    throw guard_exceeded("QBF oracle limited to " + std::to_string(kMaxQbfVars) + " variables");
  validate(q);
  const BoolExpr body = q.expr();
  auto go = [&](auto&& self, std::size_t i, std::uint64_t assignment) -> bool {
    if (i == q.vars.size()) return body.eval(assignment);
    const bool f = self(self, i + 1, assignment);
    const bool t = self(self, i + 1, assignment | (std::uint64_t{1} << i));
    return q.vars[i].kind == Quantifier::Exists ? (f || t) : (f && t);
  };
  return go(go, 0, 0);
}

inline std::string format_expr(const BoolExpr& e, const std::vector<QbfVar>& vars) {
  switch (e.kind) {
  case BoolExpr::Kind::Const: return e.value ? "true" : "false";
  case BoolExpr::Kind::Var: return vars.at(e.var).name;
  case BoolExpr::Kind::Not: return "!" + format_expr(e.args.front(), vars);
  default: break;
  }
  if (e.args.empty()) return e.kind == BoolExpr::Kind::And ? "true" : "false";
  std::string out = "(";
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    if (i) out += e.kind == BoolExpr::Kind::And ? " & " : " | ";
    out += format_expr(e.args[i], vars);
  }
  return out + ")";
}

/// e.g. "exists x1. forall x2. ((x1 | !x2))"
inline std::string format_qbf(const Qbf& q) {
  std::string out;
  for (const auto& v : q.vars) out += std::string(to_string(v.kind)) + " " + v.name + ". ";
  return out + format_expr(q.expr(), q.vars);
}

/// Deterministic pseudorandom CNF QBF with `alternations + 1` quantifier
/// blocks. Clauses have 1 to 3 literals over distinct variables. The lead
/// quantifier is drawn from the seed unless given.
inline Qbf random_qbf(std::uint64_t seed, std::size_t n_vars, std::size_t n_clauses,
                      std::size_t alternations, std::optional<Quantifier> lead = std::nullopt) {
  if (n_vars == 0) throw invalid_argument("random QBF needs at least one variable");
  if (n_vars > kMaxQbfVars)
    throw guard_exceeded("random QBF limited to " + std::to_string(kMaxQbfVars) + " variables");
  if (n_clauses == 0) throw invalid_argument("random QBF needs at least one clause");
  if (alternations >= n_vars)
    throw invalid_argument("alternations must be smaller than the number of variables");

  // Raw engine output with modulo keeps instances identical across standard
  // library implementations.
  std::mt19937_64 rng(seed);
  auto below = [&](std::size_t bound) { return static_cast<std::size_t>(rng() % bound); };

  Quantifier kind = lead ? *lead : (below(2) == 0 ? Quantifier::Exists : Quantifier::Forall);
  if (lead) rng();

  // Choose `alternations` distinct cut points among the n-1 gaps.
  std::vector<std::size_t> gaps(n_vars - 1);
  for (std::size_t i = 0; i < gaps.size(); ++i) gaps[i] = i + 1;
  for (std::size_t i = 0; i < alternations; ++i) std::swap(gaps[i], gaps[i + below(gaps.size() - i)]);
  std::vector<bool> cut(n_vars, false);
  for (std::size_t i = 0; i < alternations; ++i) cut[gaps[i]] = true;

  Qbf q;
  for (std::size_t i = 0; i < n_vars; ++i) {
    if (cut[i]) kind = flip(kind);
    q.vars.push_back({"x" + std::to_string(i + 1), kind});
  }

  Cnf cnf;
  for (std::size_t j = 0; j < n_clauses; ++j) {
    const std::size_t width = 1 + below(std::min<std::size_t>(3, n_vars));
    std::vector<std::size_t> pool(n_vars);
    for (std::size_t i = 0; i < n_vars; ++i) pool[i] = i;
    Clause c;
    for (std::size_t k = 0; k < width; ++k) {
      std::swap(pool[k], pool[k + below(n_vars - k)]);
      c.push_back({pool[k], below(2) == 0});
    }
    std::sort(c.begin(), c.end(), [](const Literal& a, const Literal& b) { return a.var < b.var; });
    cnf.push_back(std::move(c));
  }
  q.body = std::move(cnf);
  return q;
}

} // namespace hypermon
