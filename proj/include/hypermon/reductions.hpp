#pragma once

// Generators turning QBF instances into model-checking instances whose answer
// equals the QBF's truth value, labeled with that value by the QBF oracle.
//
// Acyclic gadget (CNF input, n variables, m clauses, D quantifier blocks):
//
//   s_init -> r_0 -> {s_1, s̄_1} -> ŝ_1 -> {s_2, s̄_2} -> ... -> ŝ_n (loop)
//   s_init -> r_j -> v^j_1 -> u^j_1 -> v^j_2 -> ... -> u^j_n (loop), j = 1..m
//
// r_j (j >= 1) is labeled c; s_i carries {p, q__d(i)}, s̄_i {pbar, q__d(i)};
// v^j_i carries q__d(i) plus p (pbar) when x_i (!x_i) occurs in clause j.
// Assignment traces pick s_i for x_i = true and s̄_i for false. The formula
// quantifies one trace per block (same kinds, same order) and finally all
// clause traces:
//
//   Q_1 pi1 ... Q_D piD. forall pic.
//     (AND_{d universal} X !c@pid  &  X c@pic)  ->
//     (AND_{d existential} X !c@pid  &
//      F OR_d (q__d@pid & q__d@pic & ((p@pic & p@pid) | (pbar@pic & pbar@pid))))
//
// Tree gadget (any body): the three-state tree with traces {}{x}^omega and
// {}{}^omega, one trace variable per QBF variable, x_i replaced by X x@pi_i.

#include "hypermon/error.hpp"
#include "hypermon/formula.hpp"
#include "hypermon/kripke.hpp"
#include "hypermon/qbf.hpp"

#include <string>
#include <vector>

namespace hypermon {

struct ReductionOutput {
  KripkeStructure structure;
  HyperFormula formula;
  bool ground_truth;
};

/// 1 + (m + 1) + 2nm + 3n
inline constexpr std::size_t acyclic_state_count(std::size_t n, std::size_t m) {
  return 1 + (m + 1) + 2 * n * m + 3 * n;
}

/// |delta| of the acyclic gadget, self-loops included:
/// (m + 1) + m + m + 1 + 2 + nm + (n - 1)m + 2n + 2(n - 1).
inline constexpr std::size_t acyclic_edge_count(std::size_t n, std::size_t m) {
  return 2 * n * m + 2 * m + 4 * n + 2;
}

inline std::string depth_prop(std::size_t d) { return "q__" + std::to_string(d); }

inline ReductionOutput reduce_qbf_acyclic(const Qbf& q) {
  if (!q.is_cnf()) throw invalid_argument("the acyclic reduction needs a CNF body");
  validate(q);
  const Cnf& cnf = q.cnf();
  const std::size_t n = q.vars.size();
  const std::size_t m = cnf.size();
  if (n == 0) throw invalid_argument("the acyclic reduction needs at least one variable");
  const auto depth = alternation_depths(q);
  const std::size_t blocks = depth.back();

  const StateId s_init = 0;
  auto r = [&](std::size_t j) { return static_cast<StateId>(1 + j); };
  const std::size_t clause_base = m + 2;
  auto v = [&](std::size_t i, std::size_t j) {
    return static_cast<StateId>(clause_base + (j - 1) * 2 * n + 2 * (i - 1));
  };
  auto u = [&](std::size_t i, std::size_t j) { return static_cast<StateId>(v(i, j) + 1); };
  const std::size_t assign_base = clause_base + 2 * n * m;
  auto s = [&](std::size_t i) { return static_cast<StateId>(assign_base + 3 * (i - 1)); };
  auto s_bar = [&](std::size_t i) { return static_cast<StateId>(s(i) + 1); };
  auto s_hat = [&](std::size_t i) { return static_cast<StateId>(s(i) + 2); };

  std::vector<std::vector<std::string>> props(acyclic_state_count(n, m));
  for (std::size_t j = 1; j <= m; ++j) props[r(j)].push_back("c");
  for (std::size_t j = 1; j <= m; ++j) {
    for (std::size_t i = 1; i <= n; ++i) {
      auto& label = props[v(i, j)];
      label.push_back(depth_prop(depth[i - 1]));
      for (const auto& lit : cnf[j - 1])
        if (lit.var == i - 1) label.push_back(lit.positive ? "p" : "pbar");
    }
  }
  for (std::size_t i = 1; i <= n; ++i) {
    props[s(i)] = {"p", depth_prop(depth[i - 1])};
    props[s_bar(i)] = {"pbar", depth_prop(depth[i - 1])};
  }

  std::vector<Edge> edges;
  for (std::size_t j = 0; j <= m; ++j) edges.emplace_back(s_init, r(j));
  for (std::size_t j = 1; j <= m; ++j) {
    edges.emplace_back(r(j), v(1, j));
    for (std::size_t i = 1; i <= n; ++i) {
      edges.emplace_back(v(i, j), u(i, j));
      if (i < n) edges.emplace_back(u(i, j), v(i + 1, j));
    }
    edges.emplace_back(u(n, j), u(n, j));
  }
  edges.emplace_back(r(0), s(1));
  edges.emplace_back(r(0), s_bar(1));
  for (std::size_t i = 1; i <= n; ++i) {
    edges.emplace_back(s(i), s_hat(i));
    edges.emplace_back(s_bar(i), s_hat(i));
    if (i < n) {
      edges.emplace_back(s_hat(i), s(i + 1));
      edges.emplace_back(s_hat(i), s_bar(i + 1));
    }
  }
  edges.emplace_back(s_hat(n), s_hat(n));

  std::vector<std::string> ap{"c", "p", "pbar"};
  for (std::size_t d = 1; d <= blocks; ++d) ap.push_back(depth_prop(d));
  std::vector<Letter> labels;
  labels.reserve(props.size());
  for (auto& p : props) labels.emplace_back(std::move(p));
  KripkeStructure k(std::move(labels), s_init, std::move(edges), std::move(ap));

  // One trace variable per block, kinds taken from the block's variables.
  std::vector<Quantifier> block_kind(blocks + 1);
  for (std::size_t i = 0; i < n; ++i) block_kind[depth[i]] = q.vars[i].kind;
  auto var = [](std::size_t d) { return "pi" + std::to_string(d); };
  const std::string clause_var = "pic";

  HyperFormula f;
  for (std::size_t d = 1; d <= blocks; ++d) f.prefix.push_back({block_kind[d], var(d)});
  f.prefix.push_back({Quantifier::Forall, clause_var});

  std::vector<Ltl> lhs, rhs, match;
  for (std::size_t d = 1; d <= blocks; ++d) {
    const Ltl assignment_trace = Ltl::next(Ltl::neg(Ltl::atom("c", var(d))));
    (block_kind[d] == Quantifier::Forall ? lhs : rhs).push_back(assignment_trace);
  }
  lhs.push_back(Ltl::next(Ltl::atom("c", clause_var)));
  for (std::size_t d = 1; d <= blocks; ++d) {
    const Ltl same_depth = Ltl::conj(Ltl::atom(depth_prop(d), var(d)), Ltl::atom(depth_prop(d), clause_var));
    const Ltl same_polarity =
        Ltl::disj(Ltl::conj(Ltl::atom("p", clause_var), Ltl::atom("p", var(d))),
                  Ltl::conj(Ltl::atom("pbar", clause_var), Ltl::atom("pbar", var(d))));
    match.push_back(Ltl::conj(same_depth, same_polarity));
  }
  rhs.push_back(Ltl::eventually(Ltl::disj_all(match)));
  f.body = Ltl::implies(Ltl::conj_all(lhs), Ltl::conj_all(rhs));

  return {std::move(k), std::move(f), qbf_solve(q)};
}

inline Ltl expr_to_ltl(const BoolExpr& e, const std::vector<std::string>& vars) {
  switch (e.kind) {
  case BoolExpr::Kind::Const: return e.value ? Ltl::top() : Ltl::bottom();
  case BoolExpr::Kind::Var: return Ltl::next(Ltl::atom("x", vars.at(e.var)));
  case BoolExpr::Kind::Not: return Ltl::neg(expr_to_ltl(e.args.front(), vars));
  case BoolExpr::Kind::And:
  case BoolExpr::Kind::Or: {
    std::vector<Ltl> xs;
    for (const auto& a : e.args) xs.push_back(expr_to_ltl(a, vars));
    return e.kind == BoolExpr::Kind::And ? Ltl::conj_all(xs) : Ltl::disj_all(xs);
  }
  }
  return Ltl::bottom();
}

/// Three-state tree: root {} with leaves {x} (id 1) and {} (id 2).
inline KripkeStructure two_trace_tree() {
  return KripkeStructure({Letter{}, Letter{"x"}, Letter{}}, 0, {{0, 1}, {0, 2}, {1, 1}, {2, 2}}, {"x"});
}

inline ReductionOutput reduce_qbf_tree(const Qbf& q) {
  validate(q);
  if (q.vars.empty()) throw invalid_argument("the tree reduction needs at least one variable");
  std::vector<std::string> names;
  HyperFormula f;
  for (std::size_t i = 0; i < q.vars.size(); ++i) {
    names.push_back("pi" + std::to_string(i + 1));
    f.prefix.push_back({q.vars[i].kind, names.back()});
  }
  f.body = expr_to_ltl(q.expr(), names);
  return {two_trace_tree(), std::move(f), qbf_solve(q)};
}

} // namespace hypermon
