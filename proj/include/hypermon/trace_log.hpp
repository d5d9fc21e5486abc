#pragma once

// Trace logs: a set of finite traces stored as a prefix tree (TreeLog) or as a
// prefix- and suffix-sharing acyclic structure (DagLog).

#include "hypermon/error.hpp"
#include "hypermon/kripke.hpp"
#include "hypermon/trace.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace hypermon {

enum class LogMode : std::uint8_t { Tree, Dag };

inline const char* to_string(LogMode m) noexcept { return m == LogMode::Tree ? "tree" : "dag"; }

/// Mutable prefix tree of stutter-normalized traces. Leaves carry self-loops;
/// a trace ending at an inner node continues into a leaf repeating its last
/// letter.
class TraceTrie {
public:
  bool empty() const noexcept { return nodes_.empty(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  const Letter& root_letter() const { return nodes_.front().label; }

  /// Inserts `t` (normalized first). Returns false if it was already present.
  /// Throws first_letter_mismatch when `t` cannot share the existing root.
  bool insert(const FiniteTrace& raw) {
    const FiniteTrace t = raw.normalized();
    const auto& letters = t.letters();
    if (nodes_.empty()) {
      nodes_.push_back({letters.front(), {}, false});
    } else if (!(nodes_.front().label == letters.front())) {
      throw first_letter_mismatch("trace starts with {" + format_letter(letters.front()) +
                                  "} but the log's root letter is {" +
                                  format_letter(nodes_.front().label) + "}");
    }
    const std::size_t before = nodes_.size();
    bool changed = false;
    std::uint32_t cur = 0;
    for (std::size_t i = 1; i < letters.size(); ++i) cur = step(cur, letters[i], changed);
    // The word continues with last(t) forever: end here if the node is new,
    // otherwise follow or create a stutter chain down to a leaf.
    while (!nodes_[cur].leaf) {
      if (nodes_[cur].children.empty()) {
        nodes_[cur].leaf = true;
        changed = true;
        break;
      }
      cur = step(cur, letters.back(), changed);
    }
    return changed || nodes_.size() != before;
  }

  KripkeStructure snapshot(std::vector<std::string> ap = {}) const {
    if (nodes_.empty()) throw empty_input("trace log is empty");
    std::vector<Letter> labels;
    std::vector<Edge> edges;
    for (std::uint32_t s = 0; s < nodes_.size(); ++s) {
      labels.push_back(nodes_[s].label);
      if (nodes_[s].leaf) edges.emplace_back(s, s);
      for (auto c : nodes_[s].children) edges.emplace_back(s, c);
    }
    return KripkeStructure(std::move(labels), 0, std::move(edges), std::move(ap));
  }

private:
  struct Node {
    Letter label;
    std::vector<std::uint32_t> children;
    bool leaf;
  };

  /// Child of `s` labeled `l`, creating it (and turning a leaf into an inner
  /// node that keeps its own stutter continuation) when needed. New children
  /// start as childless non-leaves; insert() finishes them.
  std::uint32_t step(std::uint32_t s, const Letter& l, bool& changed) {
    if (nodes_[s].leaf) {
      // s . label(s)^omega must stay a trace after s gains a child.
      const auto stutter = static_cast<std::uint32_t>(nodes_.size());
      nodes_.push_back({nodes_[s].label, {}, true});
      nodes_[s].leaf = false;
      nodes_[s].children.push_back(stutter);
      changed = true;
    }
    for (auto c : nodes_[s].children)
      if (nodes_[c].label == l) return c;
    const auto c = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({l, {}, false});
    nodes_[s].children.push_back(c);
    changed = true;
    return c;
  }

  std::vector<Node> nodes_;
};

/// Immutable snapshot of a trace log. Trace ids are insertion indices of the
/// distinct (stutter-normalized) traces and stay stable as the log grows.
class TraceLog {
public:
  TraceLog(LogMode mode, KripkeStructure structure, std::vector<FiniteTrace> ingested)
      : mode_(mode), structure_(std::move(structure)), ingested_(std::move(ingested)) {}

  LogMode mode() const noexcept { return mode_; }
  const KripkeStructure& structure() const noexcept { return structure_; }
  std::size_t trace_count() const noexcept { return ingested_.size(); }

  /// Normalized traces in insertion order.
  const std::vector<FiniteTrace>& ingested() const noexcept { return ingested_; }

  /// Maximal path of trace `id`, ending in a terminal state.
  std::vector<StateId> path(std::size_t id) const {
    const auto& letters = ingested_.at(id).letters();
    const auto& k = structure_;
    std::vector<StateId> out{k.init()};
    if (!(k.label(k.init()) == letters.front()))
      throw invalid_structure("trace " + std::to_string(id) + " does not start at the root");
    auto advance = [&](const Letter& l) {
      const StateId s = out.back();
      for (StateId t : k.successors(s)) {
        if (t != s && k.label(t) == l) {
          out.push_back(t);
          return;
        }
      }
      throw invalid_structure("trace " + std::to_string(id) + " is not a path of the log");
    };
    for (std::size_t i = 1; i < letters.size(); ++i) advance(letters[i]);
    while (!k.is_terminal(out.back())) advance(letters.back());
    return out;
  }

  /// Trace `id` as read back from its path in the structure.
  FiniteTrace trace(std::size_t id) const {
    std::vector<Letter> letters;
    for (StateId s : path(id)) letters.push_back(structure_.label(s));
    return FiniteTrace(std::move(letters)).normalized();
  }

  std::vector<FiniteTrace> traces() const {
    std::vector<FiniteTrace> out;
    out.reserve(ingested_.size());
    for (std::size_t i = 0; i < ingested_.size(); ++i) out.push_back(trace(i));
    return out;
  }

private:
  LogMode mode_;
  KripkeStructure structure_;
  std::vector<FiniteTrace> ingested_;
};

/// Prefix tree of `traces`. All traces must share their first letter.
inline TraceLog build_tree(const std::vector<FiniteTrace>& traces) {
  if (traces.empty()) throw empty_input("cannot build a trace log from zero traces");
  TraceTrie trie;
  std::vector<FiniteTrace> ingested;
  for (const auto& t : traces)
    if (trie.insert(t)) ingested.push_back(t.normalized());
  return TraceLog(LogMode::Tree, trie.snapshot(), std::move(ingested));
}

/// Merges states with equal label and equal successor classes, bottom-up.
/// Works on any tree or acyclic structure; ids of the result follow a
/// depth-first preorder from the initial state, so unreachable states vanish.
inline KripkeStructure minimize_structure(const KripkeStructure& k) {
  if (!is_acyclic(classify_frame(k)))
    throw unsupported_frame("minimization requires a tree or acyclic frame");
  const auto n = k.size();

  // Post-order over the reachable part assigns classes children-first.
  std::vector<std::int64_t> cls(n, -1);
  std::map<std::tuple<Letter, bool, std::vector<std::int64_t>>, std::int64_t> table;
  std::vector<std::pair<StateId, std::size_t>> stack{{k.init(), 0}};
  std::vector<char> entered(n, 0);
  entered[k.init()] = 1;
  while (!stack.empty()) {
    auto& [s, next] = stack.back();
    const auto succ = k.successors(s);
    if (next < succ.size()) {
      const StateId t = succ[next++];
      if (t != s && !entered[t]) {
        entered[t] = 1;
        stack.emplace_back(t, 0);
      }
      continue;
    }
    std::vector<std::int64_t> key;
    const bool terminal = k.is_terminal(s);
    if (!terminal)
      for (StateId t : succ) key.push_back(cls[t]);
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    auto [it, fresh] = table.try_emplace({k.label(s), terminal, std::move(key)},
                                         static_cast<std::int64_t>(table.size()));
    cls[s] = it->second;
    stack.pop_back();
  }

  // Renumber classes in preorder of first discovery.
  std::vector<std::int64_t> order(table.size(), -1);
  std::vector<StateId> repr(table.size());
  std::vector<StateId> queue{k.init()};
  std::vector<char> seen(n, 0);
  StateId next_id = 0;
  while (!queue.empty()) {
    const StateId s = queue.back();
    queue.pop_back();
    if (seen[s]) continue;
    seen[s] = 1;
    const auto c = static_cast<std::size_t>(cls[s]);
    if (order[c] < 0) {
      order[c] = next_id++;
      repr[static_cast<std::size_t>(order[c])] = s;
    }
    const auto succ = k.successors(s);
    for (auto it = succ.rbegin(); it != succ.rend(); ++it)
      if (*it != s && !seen[*it]) queue.push_back(*it);
  }

  std::vector<Letter> labels(next_id);
  std::vector<Edge> edges;
  for (StateId c = 0; c < next_id; ++c) {
    const StateId s = repr[c];
    labels[c] = k.label(s);
    for (StateId t : k.successors(s))
      edges.emplace_back(c, static_cast<StateId>(order[static_cast<std::size_t>(cls[t])]));
  }
  return KripkeStructure(std::move(labels), 0, std::move(edges), k.ap());
}

/// DagLog with the same trace set and ids as `log`.
inline TraceLog minimize_to_dag(const TraceLog& log) {
  return TraceLog(LogMode::Dag, minimize_structure(log.structure()), log.ingested());
}

} // namespace hypermon
