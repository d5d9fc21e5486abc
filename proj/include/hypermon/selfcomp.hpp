#pragma once

// Alternation-free checking through self-composition: an existential formula
// over k traces holds iff some path of K^k carries a single trace satisfying
// the body with a@pi_i renamed to a__i. Universal formulas are decided through
// their dual and complemented.
//
// The path search is a depth-first walk over (product state, obligation)
// pairs, where obligations are LTL formulas rewritten by progression:
//
//   prog(a, l) = [a in l]      prog(X f, l) = f
//   prog(f U g, l) = prog(g, l) | (prog(f, l) & (f U g))
//
// Hash-consing with constant folding and operand ordering keeps the set of
// obligations per state small. At a terminal state the rest of the word is
// l^omega and the obligation is decided directly on that loop.

#include "hypermon/check.hpp"
#include "hypermon/error.hpp"
#include "hypermon/formula.hpp"
#include "hypermon/kripke.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace hypermon {

namespace detail {

class ProgressionStore {
public:
  using Id = std::uint32_t;

  enum class Op : std::uint8_t { False, True, Atom, Not, And, Or, Next, Until, WeakUntil, Eventually, Globally };

  ProgressionStore() {
    false_ = intern({Op::False});
    true_ = intern({Op::True});
  }

  Id falsum() const noexcept { return false_; }
  Id verum() const noexcept { return true_; }

  /// Imports `f`, renaming each atom through `rename(prop, var)`.
  template <class Rename>
  Id import(const Ltl& f, Rename&& rename) {
    switch (f.kind()) {
    case LtlKind::True: return true_;
    case LtlKind::Atom: return atom(rename(f.prop(), f.var()));
    case LtlKind::Not: return neg(import(f.lhs(), rename));
    case LtlKind::And: return conj(import(f.lhs(), rename), import(f.rhs(), rename));
    case LtlKind::Or: return disj(import(f.lhs(), rename), import(f.rhs(), rename));
    case LtlKind::Implies: return disj(neg(import(f.lhs(), rename)), import(f.rhs(), rename));
    case LtlKind::Iff: {
      const Id a = import(f.lhs(), rename), b = import(f.rhs(), rename);
      return disj(conj(a, b), conj(neg(a), neg(b)));
    }
    case LtlKind::Next: return intern({Op::Next, import(f.lhs(), rename)});
    case LtlKind::Until: return intern({Op::Until, import(f.lhs(), rename), import(f.rhs(), rename)});
    case LtlKind::WeakUntil:
      return intern({Op::WeakUntil, import(f.lhs(), rename), import(f.rhs(), rename)});
    case LtlKind::Eventually: return intern({Op::Eventually, import(f.lhs(), rename)});
    case LtlKind::Globally: return intern({Op::Globally, import(f.lhs(), rename)});
    }
    return false_;
  }

  /// Obligation for the next position after reading `l`.
  Id progress(Id f, const Letter& l) {
    std::unordered_map<Id, Id> memo;
    return progress(f, l, memo);
  }

  /// Truth of `f` on the constant word l^omega.
  bool on_loop(Id f, const Letter& l) const {
    const Node& n = nodes_[f];
    switch (n.op) {
    case Op::False: return false;
    case Op::True: return true;
    case Op::Atom: return l.contains(props_[n.a]);
    case Op::Not: return !on_loop(n.a, l);
    case Op::And: return on_loop(n.a, l) && on_loop(n.b, l);
    case Op::Or: return on_loop(n.a, l) || on_loop(n.b, l);
    case Op::Next: return on_loop(n.a, l);
    case Op::Until: return on_loop(n.b, l);
    case Op::Eventually: return on_loop(n.a, l);
    case Op::Globally: return on_loop(n.a, l);
    case Op::WeakUntil: return on_loop(n.b, l) || on_loop(n.a, l);
    }
    return false;
  }

  std::size_t size() const noexcept { return nodes_.size(); }

private:
  struct Node {
    Op op;
    Id a = 0;
    Id b = 0;
    friend bool operator==(const Node&, const Node&) = default;
  };
  struct NodeHash {
    std::size_t operator()(const Node& n) const noexcept {
      return (static_cast<std::size_t>(n.op) * 0x9e3779b97f4a7c15ULL) ^ (std::size_t{n.a} << 20) ^ n.b;
    }
  };

  Id intern(Node n) {
    auto [it, fresh] = unique_.try_emplace(n, static_cast<Id>(nodes_.size()));
    if (fresh) nodes_.push_back(n);
    return it->second;
  }

  Id atom(const std::string& prop) {
    auto [it, fresh] = prop_ids_.try_emplace(prop, static_cast<Id>(props_.size()));
    if (fresh) props_.push_back(prop);
    return intern({Op::Atom, it->second});
  }

  Id neg(Id a) {
    if (a == true_) return false_;
    if (a == false_) return true_;
    if (nodes_[a].op == Op::Not) return nodes_[a].a;
    return intern({Op::Not, a});
  }

  Id conj(Id a, Id b) {
    if (a == false_ || b == false_) return false_;
    if (a == true_) return b;
    if (b == true_ || a == b) return a;
    if (a > b) std::swap(a, b);
    return intern({Op::And, a, b});
  }

  Id disj(Id a, Id b) {
    if (a == true_ || b == true_) return true_;
    if (a == false_) return b;
    if (b == false_ || a == b) return a;
    if (a > b) std::swap(a, b);
    return intern({Op::Or, a, b});
  }

  Id progress(Id f, const Letter& l, std::unordered_map<Id, Id>& memo) {
    if (auto it = memo.find(f); it != memo.end()) return it->second;
    const Node n = nodes_[f];
    Id out = f;
    switch (n.op) {
    case Op::False:
    case Op::True: out = f; break;
    case Op::Atom: out = l.contains(props_[n.a]) ? true_ : false_; break;
    case Op::Not: out = neg(progress(n.a, l, memo)); break;
    case Op::And: out = conj(progress(n.a, l, memo), progress(n.b, l, memo)); break;
    case Op::Or: out = disj(progress(n.a, l, memo), progress(n.b, l, memo)); break;
    case Op::Next: out = n.a; break;
    case Op::Until:
    case Op::WeakUntil:
      out = disj(progress(n.b, l, memo), conj(progress(n.a, l, memo), f));
      break;
    case Op::Eventually: out = disj(progress(n.a, l, memo), f); break;
    case Op::Globally: out = conj(progress(n.a, l, memo), f); break;
    }
    memo.emplace(f, out);
    return out;
  }

  std::vector<Node> nodes_;
  std::unordered_map<Node, Id, NodeHash> unique_;
  std::vector<std::string> props_;
  std::unordered_map<std::string, Id> prop_ids_;
  Id false_ = 0;
  Id true_ = 0;
};

struct PathSearch {
  const KripkeStructure& k;
  ProgressionStore& store;
  std::map<std::pair<StateId, ProgressionStore::Id>, bool> memo;

  bool search(StateId s, ProgressionStore::Id f) {
    const auto key = std::make_pair(s, f);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool found = false;
    if (k.is_terminal(s)) {
      found = store.on_loop(f, k.label(s));
    } else {
      const auto g = store.progress(f, k.label(s));
      if (g == store.verum()) {
        found = true;
      } else if (g != store.falsum()) {
        for (StateId t : k.successors(s))
          if ((found = search(t, g))) break;
      }
    }
    memo.emplace(key, found);
    return found;
  }

  /// Replays a successful search from (s, f) into a maximal state path.
  std::vector<StateId> witness_path(StateId s, ProgressionStore::Id f) {
    std::vector<StateId> path{s};
    while (!k.is_terminal(s)) {
      const auto g = store.progress(f, k.label(s));
      StateId next = k.successors(s).front();
      if (g != store.verum()) {
        for (StateId t : k.successors(s)) {
          if (search(t, g)) {
            next = t;
            break;
          }
        }
      }
      s = next;
      f = g;
      path.push_back(s);
    }
    return path;
  }
};

} // namespace detail

/// Alternation-free model checking via self-composition. Agrees with check();
/// witness indices refer to enumerate_traces order. stats.tuples_evaluated
/// counts explored (state, obligation) pairs.
inline Verdict check_selfcomp(const KripkeStructure& k, const HyperFormula& f) {
  validate(f);
  const auto cls = classify(f);
  if (!cls.alternation_free())
    throw unsupported_fragment("self-composition requires an alternation-free formula, got " + to_string(cls));
  if (!is_acyclic(classify_frame(k)))
    throw unsupported_frame("self-composition checking requires a tree or acyclic frame");

  const bool universal = cls.pattern == Pattern::ForallOnly;
  const HyperFormula g = universal ? dualize(f) : f;

  const std::size_t n = g.prefix.size();
  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < n; ++i) slot.emplace(g.prefix[i].var, i + 1);

  const KripkeStructure product = self_composition(k, n);
  detail::ProgressionStore store;
  const auto root = store.import(g.body, [&](const std::string& prop, const std::string& var) {
    return indexed_prop(prop, slot.at(var));
  });
  detail::PathSearch search{product, store, {}};
  const bool found = search.search(product.init(), root);

  Verdict v;
  v.holds = universal ? !found : found;
  v.stats.tuples_evaluated = search.memo.size();
  if (found) {
    const auto path = search.witness_path(product.init(), root);
    const auto traces = collect_traces(k);
    std::vector<Binding> w;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Letter> letters;
      for (StateId p : path) {
        // Component i is digit i (most significant first) of the product id.
        std::size_t id = p;
        for (std::size_t d = n - 1; d > i; --d) id /= k.size();
        letters.push_back(k.label(static_cast<StateId>(id % k.size())));
      }
      const FiniteTrace t = FiniteTrace(std::move(letters)).normalized();
      const auto it = std::find(traces.begin(), traces.end(), t);
      w.push_back({g.prefix[i].var, static_cast<std::size_t>(it - traces.begin())});
    }
    v.witness = std::move(w);
  }
  return v;
}

} // namespace hypermon
