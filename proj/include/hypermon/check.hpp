#pragma once

// Deciding T |= f for a finite trace set T: sequential enumeration with
// short-circuiting, and a data-parallel variant for the alternation-free and
// two-quantifier alternating fragments.

#include "hypermon/error.hpp"
#include "hypermon/eval_cache.hpp"
#include "hypermon/formula.hpp"
#include "hypermon/kripke.hpp"
#include "hypermon/ltl_eval.hpp"
#include "hypermon/trace.hpp"
#include "hypermon/trace_log.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace hypermon {

/// What quantifiers mean over an empty trace set.
enum class EmptySetPolicy : std::uint8_t {
  Error,   ///< throw empty_trace_set
  Vacuous, ///< forall -> true, exists -> false
};

struct CheckOptions {
  EmptySetPolicy empty_set = EmptySetPolicy::Error;
  /// Optional per-tuple memo; ids are indices into the checked trace list.
  EvalCache* cache = nullptr;
};

struct CheckStats {
  std::uint64_t tuples_evaluated = 0;
  std::uint64_t cache_hits = 0;

  CheckStats& operator+=(const CheckStats& o) {
    tuples_evaluated += o.tuples_evaluated;
    cache_hits += o.cache_hits;
    return *this;
  }
};

struct Binding {
  std::string var;
  std::size_t trace;
  friend bool operator==(const Binding&, const Binding&) = default;
};

/// Outcome of a check. The witness binds the outermost quantifier block and is
/// present exactly when that block decided the result (exists and true, or
/// forall and false).
struct Verdict {
  bool holds = false;
  std::optional<std::vector<Binding>> witness;
  CheckStats stats;
};

/// {"holds": bool, "witness": {"p1": traceIndex, ...} | null,
///  "stats": {"tuples_evaluated": n, "cache_hits": n}}
inline nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j;
  j["holds"] = v.holds;
  if (v.witness) {
    nlohmann::json w = nlohmann::json::object();
    for (const auto& b : *v.witness) w[b.var] = b.trace;
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  j["stats"] = {{"tuples_evaluated", v.stats.tuples_evaluated}, {"cache_hits", v.stats.cache_hits}};
  return j;
}

/// Number of leading quantifiers sharing the kind of prefix[start].
inline std::size_t block_length(const QuantifierPrefix& prefix, std::size_t start = 0) {
  std::size_t n = start;
  while (n < prefix.size() && prefix[n].kind == prefix[start].kind) ++n;
  return n - start;
}

namespace detail {

/// Evaluates the body on tuples of trace ids, through the cache if any.
class TupleTable {
public:
  TupleTable(std::span<const FiniteTrace> traces, const HyperFormula& f, EvalCache* cache)
      : slots_(slot_names(f)), body_(f.body, slots_), cache_(cache) {
    prepared_.reserve(traces.size());
    for (const auto& t : traces) prepared_.emplace_back(t, body_.props());
  }

  std::size_t trace_count() const noexcept { return prepared_.size(); }
  const CompiledBody& body() const noexcept { return body_; }

  bool eval(std::span<const std::uint32_t> ids, BodyEvaluator& ev,
            std::vector<const PreparedTrace*>& scratch, CheckStats& stats) const {
    if (cache_) {
      if (auto hit = cache_->lookup(body_.hash(), ids)) {
        ++stats.cache_hits;
        return *hit;
      }
    }
    scratch.resize(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) scratch[i] = &prepared_[ids[i]];
    const bool v = ev.holds(scratch);
    ++stats.tuples_evaluated;
    if (cache_) cache_->store(body_.hash(), ids, v);
    return v;
  }

private:
  static std::vector<std::string> slot_names(const HyperFormula& f) {
    std::vector<std::string> out;
    for (const auto& q : f.prefix) out.push_back(q.var);
    return out;
  }

  std::vector<std::string> slots_;
  CompiledBody body_;
  EvalCache* cache_;
  std::vector<PreparedTrace> prepared_;
};

class Enumerator {
public:
  Enumerator(const TupleTable& table, const QuantifierPrefix& prefix)
      : table_(&table), prefix_(&prefix), ev_(table.body()), ids_(prefix.size(), 0) {}

  bool run(std::size_t level) {
    if (level == prefix_->size()) return table_->eval(ids_, ev_, scratch_, stats);
    const bool exists = (*prefix_)[level].kind == Quantifier::Exists;
    const auto n = static_cast<std::uint32_t>(table_->trace_count());
    for (std::uint32_t t = 0; t < n; ++t) {
      ids_[level] = t;
      const bool v = run(level + 1);
      if (exists && v) return true;
      if (!exists && !v) return false;
    }
    return !exists;
  }

  std::vector<std::uint32_t>& ids() noexcept { return ids_; }
  CheckStats stats;

private:
  const TupleTable* table_;
  const QuantifierPrefix* prefix_;
  BodyEvaluator ev_;
  std::vector<std::uint32_t> ids_;
  std::vector<const PreparedTrace*> scratch_;
};

inline Verdict empty_set_verdict(const HyperFormula& f, std::size_t start, EmptySetPolicy policy) {
  if (policy == EmptySetPolicy::Error)
    throw empty_trace_set("trace set is empty; choose an explicit empty-set policy");
  return Verdict{f.prefix[start].kind == Quantifier::Forall, std::nullopt, {}};
}

} // namespace detail

/// Decides `f` with the first `fixed.size()` quantified variables bound to the
/// given trace indices. The witness, if any, covers the first free block.
inline Verdict check_from(std::span<const FiniteTrace> traces, const HyperFormula& f,
                          std::span<const std::size_t> fixed, const CheckOptions& opts = {}) {
  validate(f);
  if (fixed.size() > f.prefix.size()) throw invalid_argument("more bindings than quantifiers");
  for (auto id : fixed)
    if (id >= traces.size()) throw invalid_argument("bound trace index out of range");
  const std::size_t start = fixed.size();

  detail::TupleTable table(traces, f, opts.cache);
  detail::Enumerator e(table, f.prefix);
  for (std::size_t i = 0; i < start; ++i) e.ids()[i] = static_cast<std::uint32_t>(fixed[i]);

  if (start == f.prefix.size()) {
    Verdict v{e.run(start), std::nullopt, {}};
    v.stats = e.stats;
    return v;
  }
  if (traces.empty()) return detail::empty_set_verdict(f, start, opts.empty_set);

  Verdict v;
  v.holds = e.run(start);
  v.stats = e.stats;
  const bool exists = f.prefix[start].kind == Quantifier::Exists;
  if (v.holds == exists) {
    std::vector<Binding> w;
    for (std::size_t i = start; i < start + block_length(f.prefix, start); ++i)
      w.push_back({f.prefix[i].var, e.ids()[i]});
    v.witness = std::move(w);
  }
  return v;
}

/// T |= f over an explicit list; witness indices refer to positions in it.
inline Verdict check(std::span<const FiniteTrace> traces, const HyperFormula& f,
                     const CheckOptions& opts = {}) {
  return check_from(traces, f, {}, opts);
}

/// Checks the traces of `log` in id order, read back through its structure.
inline Verdict check(const TraceLog& log, const HyperFormula& f, const CheckOptions& opts = {}) {
  const auto traces = log.traces();
  return check(traces, f, opts);
}

/// Checks Traces(k) in enumerate_traces order. Throws unsupported_frame for
/// general frames.
inline Verdict check(const KripkeStructure& k, const HyperFormula& f, const CheckOptions& opts = {}) {
  const auto traces = collect_traces(k);
  return check(traces, f, opts);
}

// ---------------------------------------------------------------------------
// Parallel evaluation

/// True for alternation-free prefixes and for two-quantifier AE / EA ones.
inline bool parallel_supported(const HyperFormula& f) {
  const auto c = classify(f);
  return c.alternation_free() || (f.prefix.size() == 2 && c.alternation_depth == 1);
}

/// Largest tuple space check_parallel will materialize.
inline constexpr std::uint64_t kMaxParallelTuples = std::uint64_t{1} << 28;

namespace detail {

/// Pairwise reduction, so the combination forms a balanced binary tree.
inline bool tree_reduce(std::span<const std::uint8_t> xs, bool conjunction) {
  if (xs.empty()) return conjunction;
  if (xs.size() == 1) return xs[0] != 0;
  const auto mid = xs.size() / 2;
  const bool l = tree_reduce(xs.first(mid), conjunction);
  const bool r = tree_reduce(xs.subspan(mid), conjunction);
  return conjunction ? (l && r) : (l || r);
}

} // namespace detail

/// Evaluates every tuple with `workers` threads, then folds the results
/// through a conjunction/disjunction tree that mirrors the prefix. Verdict
/// and witness match check() for every worker count.
inline Verdict check_parallel(std::span<const FiniteTrace> traces, const HyperFormula& f,
                              std::size_t workers, const CheckOptions& opts = {}) {
  validate(f);
  if (workers == 0) throw invalid_argument("workers must be positive");
  if (!parallel_supported(f))
    throw unsupported_fragment("parallel evaluation supports alternation-free formulas and "
                               "two-quantifier AE/EA formulas, got " + to_string(classify(f)));
  if (traces.empty()) return detail::empty_set_verdict(f, 0, opts.empty_set);

  const std::size_t k = f.prefix.size();
  const std::uint64_t n = traces.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > kMaxParallelTuples / n)
      throw guard_exceeded("parallel evaluation limited to " + std::to_string(kMaxParallelTuples) + " tuples");
    total *= n;
  }

  detail::TupleTable table(traces, f, opts.cache);
  std::vector<std::uint8_t> results(total);
  std::vector<CheckStats> stats(workers);

  auto work = [&](std::size_t w) {
    BodyEvaluator ev(table.body());
    std::vector<const PreparedTrace*> scratch;
    std::vector<std::uint32_t> ids(k);
    const std::uint64_t lo = total * w / workers, hi = total * (w + 1) / workers;
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      std::uint64_t rest = idx;
      for (std::size_t i = k; i-- > 0;) {
        ids[i] = static_cast<std::uint32_t>(rest % n);
        rest /= n;
      }
      results[idx] = table.eval(ids, ev, scratch, stats[w]) ? 1 : 0;
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
  }

  Verdict v;
  for (const auto& s : stats) v.stats += s;
  const bool lead_forall = f.prefix.front().kind == Quantifier::Forall;

  auto decode = [&](std::uint64_t idx, std::size_t len) {
    std::vector<Binding> w(len);
    std::uint64_t rest = idx;
    for (std::size_t i = len; i-- > 0;) {
      w[i] = {f.prefix[i].var, static_cast<std::size_t>(rest % n)};
      rest /= n;
    }
    return w;
  };

  if (classify(f).alternation_free()) {
    v.holds = detail::tree_reduce(results, lead_forall);
    if (v.holds != lead_forall) {
      const auto decisive = static_cast<std::uint8_t>(lead_forall ? 0 : 1);
      const auto it = std::find(results.begin(), results.end(), decisive);
      v.witness = decode(static_cast<std::uint64_t>(it - results.begin()), k);
    }
    return v;
  }

  // forall p. exists q (or the dual): one inner fold per outer trace.
  std::vector<std::uint8_t> inner(n);
  const std::span<const std::uint8_t> all(results);
  for (std::uint64_t t = 0; t < n; ++t)
    inner[t] = detail::tree_reduce(all.subspan(t * n, n), !lead_forall) ? 1 : 0;
  v.holds = detail::tree_reduce(inner, lead_forall);
  if (v.holds != lead_forall) {
    const auto decisive = static_cast<std::uint8_t>(lead_forall ? 0 : 1);
    const auto it = std::find(inner.begin(), inner.end(), decisive);
    v.witness = decode(static_cast<std::uint64_t>(it - inner.begin()), 1);
  }
  return v;
}

inline Verdict check_parallel(const TraceLog& log, const HyperFormula& f, std::size_t workers,
                              const CheckOptions& opts = {}) {
  const auto traces = log.traces();
  return check_parallel(traces, f, workers, opts);
}

inline Verdict check_parallel(const KripkeStructure& k, const HyperFormula& f, std::size_t workers,
                              const CheckOptions& opts = {}) {
  const auto traces = collect_traces(k);
  return check_parallel(traces, f, workers, opts);
}

} // namespace hypermon
