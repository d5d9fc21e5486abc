#pragma once

// Incremental monitoring: a fixed policy re-checked after every batch of new
// traces. Per-tuple results are cached across batches (trace ids are stable),
// and verdicts that no future batch can change are locked.

#include "hypermon/check.hpp"
#include "hypermon/error.hpp"
#include "hypermon/eval_cache.hpp"
#include "hypermon/formula.hpp"
#include "hypermon/trace.hpp"
#include "hypermon/trace_log.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hypermon {

struct Batch {
  std::vector<FiniteTrace> traces;
  std::optional<std::string> label;
};

struct HistoryEntry {
  std::size_t batch;
  Verdict verdict;
  std::uint64_t tuples_evaluated;
};

class Session {
public:
  explicit Session(HyperFormula policy, LogMode mode = LogMode::Tree,
                   EmptySetPolicy empty_set = EmptySetPolicy::Error)
      : policy_(std::move(policy)), mode_(mode), empty_set_(empty_set),
        fragment_((validate(policy_), classify(policy_))), cache_(std::make_unique<EvalCache>()) {}

  const HyperFormula& policy() const noexcept { return policy_; }
  LogMode mode() const noexcept { return mode_; }
  std::optional<bool> locked_verdict() const noexcept { return locked_; }
  const std::vector<HistoryEntry>& history() const noexcept { return history_; }
  const std::vector<FiniteTrace>& traces() const noexcept { return ingested_; }
  const EvalCache& cache() const noexcept { return *cache_; }

  /// Current log; throws empty_input before the first batch.
  const TraceLog& log() const {
    if (!log_) throw empty_input("no traces ingested yet");
    return *log_;
  }

  /// Adds `b` to the log and re-checks the policy. The whole batch is
  /// rejected (log unchanged) when one of its traces has the wrong root.
  const Verdict& ingest(const Batch& b) {
    if (b.traces.empty()) throw invalid_argument("a batch must contain at least one trace");
    TraceTrie next = trie_;
    std::vector<FiniteTrace> added;
    for (const auto& t : b.traces)
      if (next.insert(t)) added.push_back(t.normalized());
    trie_ = std::move(next);
    ingested_.insert(ingested_.end(), added.begin(), added.end());

    TraceLog tree(LogMode::Tree, trie_.snapshot(), ingested_);
    log_ = mode_ == LogMode::Dag ? minimize_to_dag(tree) : std::move(tree);

    if (locked_) {
      current_ = Verdict{*locked_, current_.witness, {}};
    } else {
      current_ = check(*log_, policy_, CheckOptions{empty_set_, cache_.get()});
      if (fragment_.pattern == Pattern::ForallOnly && !current_.holds) locked_ = false;
      if (fragment_.pattern == Pattern::ExistsOnly && current_.holds) locked_ = true;
    }
    history_.push_back({history_.size(), current_, current_.stats.tuples_evaluated});
    return current_;
  }

  /// Verdict after the latest batch. Before any batch this is the empty-set
  /// reading of the policy, or empty_trace_set under EmptySetPolicy::Error.
  Verdict current_verdict() const {
    if (history_.empty()) return detail::empty_set_verdict(policy_, 0, empty_set_);
    return current_;
  }

private:
  HyperFormula policy_;
  LogMode mode_;
  EmptySetPolicy empty_set_;
  FragmentClass fragment_;
  std::unique_ptr<EvalCache> cache_;
  TraceTrie trie_;
  std::vector<FiniteTrace> ingested_;
  std::optional<TraceLog> log_;
  std::optional<bool> locked_;
  Verdict current_;
  std::vector<HistoryEntry> history_;
};

} // namespace hypermon
