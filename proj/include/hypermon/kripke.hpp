#pragma once

// Kripke structures over finite traces: frame classification, lazy trace
// enumeration, n-fold self-composition and the JSON structure format
//
//   {"ap": [...], "states": [{"id": n, "props": [...]}], "init": n,
//    "edges": [[from, to], ...]}

#include "hypermon/error.hpp"
#include "hypermon/formula.hpp"
#include "hypermon/trace.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hypermon {

using StateId = std::uint32_t;
using Edge = std::pair<StateId, StateId>;

/// States 0..size()-1 with a total transition relation. Immutable.
class KripkeStructure {
public:
  /// Throws invalid_structure if `init` or an edge endpoint is out of range,
  /// a label uses a proposition outside `ap`, or some state has no successor.
  /// An empty `ap` is replaced by the union of all labels.
  KripkeStructure(std::vector<Letter> labels, StateId init, std::vector<Edge> edges,
                  std::vector<std::string> ap = {})
      : labels_(std::move(labels)), init_(init), ap_(std::move(ap)) {
    const auto n = labels_.size();
    if (n == 0) throw invalid_structure("structure has no states");
    if (init_ >= n) throw invalid_structure("initial state " + std::to_string(init_) + " does not exist");
    if (ap_.empty()) {
      std::set<std::string> all;
      for (const auto& l : labels_) all.insert(l.props().begin(), l.props().end());
      ap_.assign(all.begin(), all.end());
    } else {
      std::sort(ap_.begin(), ap_.end());
      ap_.erase(std::unique(ap_.begin(), ap_.end()), ap_.end());
      for (StateId s = 0; s < n; ++s)
        for (const auto& p : labels_[s].props())
          if (!std::binary_search(ap_.begin(), ap_.end(), p))
            throw invalid_structure("state " + std::to_string(s) + " is labeled with '" + p +
                                    "', which is not in ap");
    }
    succ_.assign(n, {});
    for (auto [from, to] : edges) {
      if (from >= n || to >= n)
        throw invalid_structure("edge (" + std::to_string(from) + ", " + std::to_string(to) +
                                ") references a missing state");
      succ_[from].push_back(to);
    }
    for (StateId s = 0; s < n; ++s) {
      auto& out = succ_[s];
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      if (out.empty())
        throw invalid_structure("state " + std::to_string(s) + " has no successor (totality violated)");
    }
  }

  std::size_t size() const noexcept { return labels_.size(); }
  StateId init() const noexcept { return init_; }
  const Letter& label(StateId s) const { return labels_.at(s); }
  const std::vector<Letter>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& ap() const noexcept { return ap_; }
  std::span<const StateId> successors(StateId s) const { return succ_.at(s); }

  /// True when the only outgoing transition of `s` is its self-loop.
  bool is_terminal(StateId s) const {
    const auto& out = succ_.at(s);
    return out.size() == 1 && out.front() == s;
  }

  std::size_t edge_count() const noexcept {
    std::size_t c = 0;
    for (const auto& out : succ_) c += out.size();
    return c;
  }

  /// Edges in (from, to) lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (StateId s = 0; s < succ_.size(); ++s)
      for (StateId t : succ_[s]) out.emplace_back(s, t);
    return out;
  }

  friend bool operator==(const KripkeStructure&, const KripkeStructure&) = default;

private:
  std::vector<Letter> labels_;
  StateId init_;
  std::vector<std::string> ap_;
  std::vector<std::vector<StateId>> succ_;
};

enum class FrameClass : std::uint8_t { Tree, Acyclic, General };

inline const char* to_string(FrameClass c) noexcept {
  switch (c) {
  case FrameClass::Tree: return "tree";
  case FrameClass::Acyclic: return "acyclic";
  case FrameClass::General: return "general";
  }
  return "?";
}

/// Trees are acyclic frames too; both admit finite trace enumeration.
inline bool is_acyclic(FrameClass c) noexcept { return c != FrameClass::General; }

/// Most specific class: Tree, else Acyclic (only cycles are self-loops on
/// terminal states), else General.
inline FrameClass classify_frame(const KripkeStructure& k) {
  const auto n = k.size();
  std::vector<std::size_t> indegree(n, 0);
  for (StateId s = 0; s < n; ++s) {
    for (StateId t : k.successors(s)) {
      if (t == s) {
        if (!k.is_terminal(s)) return FrameClass::General;
        continue;
      }
      ++indegree[t];
    }
  }
  // Kahn's algorithm on the graph without self-loops.
  std::vector<StateId> ready;
  std::vector<std::size_t> remaining = indegree;
  for (StateId s = 0; s < n; ++s)
    if (remaining[s] == 0) ready.push_back(s);
  std::size_t visited = 0;
  while (!ready.empty()) {
    const StateId s = ready.back();
    ready.pop_back();
    ++visited;
    for (StateId t : k.successors(s))
      if (t != s && --remaining[t] == 0) ready.push_back(t);
  }
  if (visited != n) return FrameClass::General;

  for (StateId s = 0; s < n; ++s) {
    const std::size_t expected = s == k.init() ? 0 : 1;
    if (indegree[s] != expected) return FrameClass::Acyclic;
  }
  return FrameClass::Tree;
}

/// Lazily walks the maximal paths of a tree or acyclic structure in
/// lexicographic state-id order and yields each distinct trace once, in
/// stutter-normal form.
class TraceEnumerator {
public:
  explicit TraceEnumerator(const KripkeStructure& k) : k_(&k) {
    if (!is_acyclic(classify_frame(k)))
      throw unsupported_frame("trace enumeration requires a tree or acyclic frame");
    stack_.push_back({k.init(), 0});
  }

  /// Next unseen trace, or nullopt when exhausted.
  std::optional<FiniteTrace> next() {
    while (!stack_.empty()) {
      auto& top = stack_.back();
      const StateId s = top.state;
      if (k_->is_terminal(s)) {
        path_.clear();
        for (const auto& f : stack_) path_.push_back(f.state);
        stack_.pop_back();
        std::vector<Letter> letters;
        letters.reserve(path_.size());
        for (StateId p : path_) letters.push_back(k_->label(p));
        FiniteTrace t = FiniteTrace(std::move(letters)).normalized();
        if (seen_.insert(t).second) return t;
        continue;
      }
      const auto succ = k_->successors(s);
      if (top.next == succ.size()) {
        stack_.pop_back();
        continue;
      }
      const StateId child = succ[top.next++];
      stack_.push_back({child, 0});
    }
    return std::nullopt;
  }

  /// State path of the trace most recently returned by next().
  const std::vector<StateId>& path() const noexcept { return path_; }

private:
  struct Frame {
    StateId state;
    std::size_t next;
  };

  const KripkeStructure* k_;
  std::vector<Frame> stack_;
  std::vector<StateId> path_;
  std::set<FiniteTrace> seen_;
};

/// Throws unsupported_frame for general frames.
inline TraceEnumerator enumerate_traces(const KripkeStructure& k) { return TraceEnumerator(k); }

/// Materializes enumerate_traces(k).
inline std::vector<FiniteTrace> collect_traces(const KripkeStructure& k) {
  std::vector<FiniteTrace> out;
  auto e = enumerate_traces(k);
  while (auto t = e.next()) out.push_back(std::move(*t));
  return out;
}

/// Proposition `a` of component `i` (1-based) in a self-composition.
inline std::string indexed_prop(const std::string& prop, std::size_t index) {
  return prop + "__" + std::to_string(index);
}

/// Upper bound on the number of product states self_composition will build.
inline constexpr std::size_t kMaxProductStates = std::size_t{1} << 22;

/// n-fold product K^n. Tuple (s_1, ..., s_n) gets id sum s_i * |S|^(n-i), so
/// the first component is most significant; its label is {a__i | a in L(s_i)}.
inline KripkeStructure self_composition(const KripkeStructure& k, std::size_t n) {
  if (n == 0) throw invalid_argument("self-composition needs at least one component");
  const std::size_t base = k.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > kMaxProductStates / base)
      throw guard_exceeded("self-composition would exceed " + std::to_string(kMaxProductStates) + " states");
    total *= base;
  }

  auto decode = [&](std::size_t id) {
    std::vector<StateId> tuple(n);
    for (std::size_t i = n; i-- > 0;) {
      tuple[i] = static_cast<StateId>(id % base);
      id /= base;
    }
    return tuple;
  };

  std::vector<Letter> labels;
  labels.reserve(total);
  std::vector<Edge> edges;
  for (std::size_t id = 0; id < total; ++id) {
    const auto tuple = decode(id);
    std::vector<std::string> props;
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& a : k.label(tuple[i]).props()) props.push_back(indexed_prop(a, i + 1));
    labels.emplace_back(std::move(props));

    // Cartesian product of component successor lists.
    std::vector<std::size_t> cursor(n, 0);
    while (true) {
      std::size_t target = 0;
      for (std::size_t i = 0; i < n; ++i) target = target * base + k.successors(tuple[i])[cursor[i]];
      edges.emplace_back(static_cast<StateId>(id), static_cast<StateId>(target));
      std::size_t i = n;
      while (i-- > 0) {
        if (++cursor[i] < k.successors(tuple[i]).size()) break;
        cursor[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
  }

  std::size_t init = 0;
  for (std::size_t i = 0; i < n; ++i) init = init * base + k.init();

  std::vector<std::string> ap;
  for (std::size_t i = 1; i <= n; ++i)
    for (const auto& a : k.ap()) ap.push_back(indexed_prop(a, i));
  return KripkeStructure(std::move(labels), static_cast<StateId>(init), std::move(edges), std::move(ap));
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const KripkeStructure& k) {
  nlohmann::json j;
  j["ap"] = k.ap();
  auto states = nlohmann::json::array();
  for (StateId s = 0; s < k.size(); ++s)
    states.push_back({{"id", s}, {"props", k.label(s).props()}});
  j["states"] = std::move(states);
  j["init"] = k.init();
  auto edges = nlohmann::json::array();
  for (auto [from, to] : k.edges()) edges.push_back({from, to});
  j["edges"] = std::move(edges);
  return j;
}

/// State ids may be any distinct non-negative integers; they are renumbered
/// densely in ascending order.
inline KripkeStructure structure_from_json(const nlohmann::json& j) {
  try {
    std::vector<std::string> ap;
    if (j.contains("ap")) ap = j.at("ap").get<std::vector<std::string>>();
    for (const auto& a : ap)
      if (!is_identifier(a) || is_reserved_name(a))
        throw invalid_structure("invalid proposition name '" + a + "' in ap");

    std::map<std::int64_t, std::vector<std::string>> states;
    for (const auto& s : j.at("states")) {
      const auto id = s.at("id").get<std::int64_t>();
      if (id < 0) throw invalid_structure("negative state id " + std::to_string(id));
      std::vector<std::string> props;
      if (s.contains("props")) props = s.at("props").get<std::vector<std::string>>();
      if (!states.emplace(id, std::move(props)).second)
        throw invalid_structure("duplicate state id " + std::to_string(id));
    }
    std::map<std::int64_t, StateId> dense;
    std::vector<Letter> labels;
    for (auto& [id, props] : states) {
      dense.emplace(id, static_cast<StateId>(labels.size()));
      labels.emplace_back(std::move(props));
    }
    auto lookup = [&](std::int64_t id) {
      auto it = dense.find(id);
      if (it == dense.end()) throw invalid_structure("unknown state id " + std::to_string(id));
      return it->second;
    };
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw invalid_structure("edges must be [from, to] pairs");
      edges.emplace_back(lookup(e[0].get<std::int64_t>()), lookup(e[1].get<std::int64_t>()));
    }
    return KripkeStructure(std::move(labels), lookup(j.at("init").get<std::int64_t>()),
                           std::move(edges), std::move(ap));
  } catch (const nlohmann::json::exception& e) {
    throw invalid_structure(std::string("malformed structure JSON: ") + e.what());
  }
}

} // namespace hypermon
