#pragma once

// Reference semantics used to cross-check the optimized engines: a literal
// recursive reading of the satisfaction relation on suffixes. No caching, no
// short-circuiting across quantifiers, derived operators expanded by their
// definitions (F p = true U p, G p = !F !p, p W q = (p U q) | G p).

#include "hypermon/error.hpp"
#include "hypermon/formula.hpp"
#include "hypermon/trace.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace hypermon {

inline constexpr std::uint64_t kBruteForceLimit = 1'000'000;

namespace detail {

class SuffixSemantics {
public:
  explicit SuffixSemantics(std::size_t horizon) : horizon_(horizon) {}

  /// Pi[j, inf] |= f. Beyond `horizon_` every bound trace repeats its last
  /// letter, so suffixes from there on are all equal.
  bool sat(const Ltl& f, const std::map<std::string, const FiniteTrace*>& pi, std::size_t j) const {
    switch (f.kind()) {
    case LtlKind::True:
      return true;
    case LtlKind::Atom: {
      auto it = pi.find(f.var());
      if (it == pi.end()) throw formula_error("unbound trace variable '" + f.var() + "'");
      return it->second->at(j).contains(f.prop());
    }
    case LtlKind::Not:
      return !sat(f.lhs(), pi, j);
    case LtlKind::Or:
      return sat(f.lhs(), pi, j) || sat(f.rhs(), pi, j);
    case LtlKind::And:
      return !(!sat(f.lhs(), pi, j) || !sat(f.rhs(), pi, j));
    case LtlKind::Implies:
      return !sat(f.lhs(), pi, j) || sat(f.rhs(), pi, j);
    case LtlKind::Iff:
      return sat(f.lhs(), pi, j) == sat(f.rhs(), pi, j);
    case LtlKind::Next:
      return sat(f.lhs(), pi, std::min(j + 1, horizon_));
    case LtlKind::Until:
      return until(f.lhs(), f.rhs(), pi, j);
    case LtlKind::Eventually:
      return until(Ltl::top(), f.lhs(), pi, j);
    case LtlKind::Globally:
      return !until(Ltl::top(), Ltl::neg(f.lhs()), pi, j);
    case LtlKind::WeakUntil:
      return until(f.lhs(), f.rhs(), pi, j) || !until(Ltl::top(), Ltl::neg(f.lhs()), pi, j);
    }
    return false;
  }

private:
  // exists i >= j: psi at i and phi on [j, i). Witnesses past the horizon
  // repeat the one at the horizon.
  bool until(const Ltl& phi, const Ltl& psi, const std::map<std::string, const FiniteTrace*>& pi,
             std::size_t j) const {
    for (std::size_t i = std::min(j, horizon_); i <= horizon_; ++i) {
      bool prefix_ok = true;
      for (std::size_t k = j; k < i && prefix_ok; ++k) prefix_ok = sat(phi, pi, k);
      if (prefix_ok && sat(psi, pi, i)) return true;
    }
    return false;
  }

  std::size_t horizon_;
};

inline bool brute_quantify(std::span<const FiniteTrace> traces, const HyperFormula& f, std::size_t level,
                           std::map<std::string, const FiniteTrace*>& pi) {
  if (level == f.prefix.size()) {
    // One extra position past the longest bound trace keeps the horizon
    // strictly inside the constant tail.
    std::size_t horizon = 0;
    for (const auto& [var, t] : pi) horizon = std::max(horizon, t->size());
    return SuffixSemantics(horizon + 1).sat(f.body, pi, 0);
  }
  std::vector<bool> results;
  for (const auto& t : traces) {
    pi[f.prefix[level].var] = &t;
    results.push_back(brute_quantify(traces, f, level + 1, pi));
  }
  pi.erase(f.prefix[level].var);
  bool any = false, all = true;
  for (bool r : results) {
    any = any || r;
    all = all && r;
  }
  return f.prefix[level].kind == Quantifier::Exists ? any : all;
}

} // namespace detail

/// Independent oracle for check(). Throws guard_exceeded when the tuple space
/// exceeds kBruteForceLimit.
inline bool brute_force_check(std::span<const FiniteTrace> traces, const HyperFormula& f) {
  validate(f);
  if (traces.empty()) throw empty_trace_set("brute-force oracle needs at least one trace");
  std::uint64_t tuples = 1;
  for (std::size_t i = 0; i < f.prefix.size(); ++i) {
    tuples *= traces.size();
    if (tuples > kBruteForceLimit)
      throw guard_exceeded("brute-force oracle limited to " + std::to_string(kBruteForceLimit) + " tuples");
  }
  std::map<std::string, const FiniteTrace*> pi;
  return detail::brute_quantify(traces, f, 0, pi);
}

} // namespace hypermon
