#pragma once

// Finite-trace evaluation of quantifier-free bodies over trace tuples.
//
// Every bound trace u is read as u . last(u)^omega. With N the largest index
// of a finite letter among the bound traces, the joint word is constant from
// position N on, so truth values at positions 0..N determine everything; at
// N itself U, F, G and W collapse to their value on a one-letter loop.
//
// Each subformula is evaluated for all positions at once as a bit row
// (bit j = truth at position j), bottom-up over the syntax tree. Until uses
// the doubling recurrence
//
//   R' = R | (G & (R >> s)),  G' = G & (G >> s),  s = 1, 2, 4, ...
//
// which is the backwards recursion (phi U psi)_j = psi_j | (phi_j & (phi U psi)_{j+1})
// unrolled in log N word operations.

#include "hypermon/error.hpp"
#include "hypermon/formula.hpp"
#include "hypermon/trace.hpp"

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace hypermon {

/// Body flattened to post-order instructions; atoms refer to tuple slots.
class CompiledBody {
public:
  struct Instr {
    LtlKind op;
    std::uint32_t lhs = 0;
    std::uint32_t rhs = 0;
    std::uint32_t slot = 0;
    std::uint32_t prop = 0;
  };

  /// `slots[i]` names the trace variable bound to tuple position i. Throws
  /// formula_error if the body mentions any other variable.
  CompiledBody(const Ltl& body, std::span<const std::string> slots)
      : slots_(slots.begin(), slots.end()) {
    std::unordered_map<std::string, std::uint32_t> slot_of;
    for (std::uint32_t i = 0; i < slots_.size(); ++i) slot_of.emplace(slots_[i], i);
    std::map<std::string, std::uint32_t> prop_of;
    emit(body, slot_of, prop_of);
    std::uint64_t h = body.hash();
    for (const auto& s : slots_) {
      for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
      h = (h ^ 0xff) * 1099511628211ULL;
    }
    hash_ = static_cast<std::size_t>(h);
  }

  const std::vector<Instr>& code() const noexcept { return code_; }
  const std::vector<std::string>& props() const noexcept { return props_; }
  const std::vector<std::string>& slots() const noexcept { return slots_; }
  std::size_t slot_count() const noexcept { return slots_.size(); }

  /// Hash of the body together with the slot naming; tuple-level cache key.
  std::size_t hash() const noexcept { return hash_; }

private:
  std::uint32_t emit(const Ltl& f, const std::unordered_map<std::string, std::uint32_t>& slot_of,
                     std::map<std::string, std::uint32_t>& prop_of) {
    Instr in{f.kind()};
    if (f.kind() == LtlKind::Atom) {
      auto it = slot_of.find(f.var());
      if (it == slot_of.end()) throw formula_error("unbound trace variable '" + f.var() + "'");
      in.slot = it->second;
      auto [p, fresh] = prop_of.try_emplace(f.prop(), static_cast<std::uint32_t>(props_.size()));
      if (fresh) props_.push_back(f.prop());
      in.prop = p->second;
    } else if (is_unary(f.kind())) {
      in.lhs = emit(f.lhs(), slot_of, prop_of);
    } else if (is_binary(f.kind())) {
      in.lhs = emit(f.lhs(), slot_of, prop_of);
      in.rhs = emit(f.rhs(), slot_of, prop_of);
    }
    code_.push_back(in);
    return static_cast<std::uint32_t>(code_.size() - 1);
  }

  std::vector<std::string> slots_;
  std::vector<std::string> props_;
  std::vector<Instr> code_;
  std::size_t hash_ = 0;
};

/// Per-proposition position masks of one trace, precomputed for a body.
class PreparedTrace {
public:
  PreparedTrace(const FiniteTrace& t, const std::vector<std::string>& props) : length_(t.size()) {
    const std::size_t words = (length_ + 63) / 64;
    masks_.assign(props.size() * words, 0);
    tails_.assign(props.size(), 0);
    words_ = words;
    for (std::size_t p = 0; p < props.size(); ++p) {
      for (std::size_t i = 0; i < length_; ++i)
        if (t.letters()[i].contains(props[p])) masks_[p * words + i / 64] |= std::uint64_t{1} << (i % 64);
      tails_[p] = t.back().contains(props[p]) ? 1 : 0;
    }
  }

  std::size_t length() const noexcept { return length_; }
  std::span<const std::uint64_t> mask(std::size_t prop) const {
    return {masks_.data() + prop * words_, words_};
  }
  bool tail(std::size_t prop) const noexcept { return tails_[prop] != 0; }

private:
  std::size_t length_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> masks_;
  std::vector<char> tails_;
};

namespace detail {

struct WordRows {
  using Row = std::uint64_t;
  std::size_t width;
  Row all;

  explicit WordRows(std::size_t w) : width(w), all(w == 64 ? ~Row{0} : (Row{1} << w) - 1) {}

  Row ones() const { return all; }
  Row neg(Row x) const { return ~x & all; }
  static Row shr(Row x, std::size_t s) { return s >= 64 ? 0 : x >> s; }
  bool bit(Row x, std::size_t i) const { return (x >> i) & 1U; }
  Row top(Row x) const { return x & (Row{1} << (width - 1)); }

  Row atom(const PreparedTrace& t, std::size_t prop) const {
    Row r = t.mask(prop)[0];
    if (t.tail(prop) && t.length() < width) r |= all & ~((Row{1} << t.length()) - 1);
    return r;
  }
};

struct WideRows {
  using Row = boost::dynamic_bitset<std::uint64_t>;
  std::size_t width;

  explicit WideRows(std::size_t w) : width(w) {}

  Row ones() const { return Row(width).set(); }
  static Row neg(const Row& x) { return ~x; }
  static Row shr(const Row& x, std::size_t s) { return x >> s; }
  static bool bit(const Row& x, std::size_t i) { return x.test(i); }
  Row top(const Row& x) const {
    Row r(width);
    r.set(width - 1, x.test(width - 1));
    return r;
  }

  Row atom(const PreparedTrace& t, std::size_t prop) const {
    const auto m = t.mask(prop);
    Row r(m.begin(), m.end());
    r.resize(width);
    if (t.tail(prop))
      for (std::size_t i = t.length(); i < width; ++i) r.set(i);
    return r;
  }
};

template <class Rows>
typename Rows::Row until_row(const Rows& ops, typename Rows::Row hold, typename Rows::Row goal) {
  for (std::size_t s = 1; s < ops.width; s <<= 1) {
    goal |= hold & Rows::shr(goal, s);
    hold &= Rows::shr(hold, s);
  }
  return goal;
}

template <class Rows>
typename Rows::Row eventually_row(const Rows& ops, typename Rows::Row goal) {
  for (std::size_t s = 1; s < ops.width; s <<= 1) goal |= Rows::shr(goal, s);
  return goal;
}

template <class Rows>
void run_rows(const Rows& ops, const CompiledBody& body, std::span<const PreparedTrace* const> tuple,
              std::vector<typename Rows::Row>& regs) {
  using Row = typename Rows::Row;
  const auto& code = body.code();
  regs.resize(code.size());
  for (std::size_t i = 0; i < code.size(); ++i) {
    const auto& in = code[i];
    Row& out = regs[i];
    switch (in.op) {
    case LtlKind::True: out = ops.ones(); break;
    case LtlKind::Atom: out = ops.atom(*tuple[in.slot], in.prop); break;
    case LtlKind::Not: out = ops.neg(regs[in.lhs]); break;
    case LtlKind::And: out = regs[in.lhs] & regs[in.rhs]; break;
    case LtlKind::Or: out = regs[in.lhs] | regs[in.rhs]; break;
    case LtlKind::Implies: out = ops.neg(regs[in.lhs]) | regs[in.rhs]; break;
    case LtlKind::Iff: out = ops.neg(regs[in.lhs] ^ regs[in.rhs]); break;
    case LtlKind::Next: out = Rows::shr(regs[in.lhs], 1) | ops.top(regs[in.lhs]); break;
    case LtlKind::Until: out = until_row(ops, regs[in.lhs], regs[in.rhs]); break;
    case LtlKind::Eventually: out = eventually_row(ops, regs[in.lhs]); break;
    case LtlKind::Globally: out = ops.neg(eventually_row(ops, ops.neg(regs[in.lhs]))); break;
    case LtlKind::WeakUntil:
      out = until_row(ops, regs[in.lhs], regs[in.rhs]) |
            ops.neg(eventually_row(ops, ops.neg(regs[in.lhs])));
      break;
    }
  }
}

} // namespace detail

/// Reusable evaluation scratch for one compiled body. Not thread-safe; use one
/// per thread.
class BodyEvaluator {
public:
  explicit BodyEvaluator(const CompiledBody& body) : body_(&body) {}

  /// Truth of the body at position 0 of the tuple's joint word.
  bool holds(std::span<const PreparedTrace* const> tuple) {
    const std::size_t width = horizon(tuple) + 1;
    if (width <= 64) {
      detail::WordRows ops(width);
      detail::run_rows(ops, *body_, tuple, words_);
      return words_.back() & 1U;
    }
    detail::WideRows ops(width);
    detail::run_rows(ops, *body_, tuple, wide_);
    return wide_.back().test(0);
  }

  /// Truth at every position 0..N; positions beyond N repeat entry N.
  std::vector<bool> row(std::span<const PreparedTrace* const> tuple) {
    const std::size_t width = horizon(tuple) + 1;
    std::vector<bool> out(width);
    if (width <= 64) {
      detail::WordRows ops(width);
      detail::run_rows(ops, *body_, tuple, words_);
      for (std::size_t i = 0; i < width; ++i) out[i] = ops.bit(words_.back(), i);
    } else {
      detail::WideRows ops(width);
      detail::run_rows(ops, *body_, tuple, wide_);
      for (std::size_t i = 0; i < width; ++i) out[i] = wide_.back().test(i);
    }
    return out;
  }

  /// N: largest finite-letter index among the tuple's traces.
  static std::size_t horizon(std::span<const PreparedTrace* const> tuple) {
    std::size_t n = 1;
    for (const auto* t : tuple) n = std::max(n, t->length());
    return n - 1;
  }

private:
  const CompiledBody* body_;
  std::vector<std::uint64_t> words_;
  std::vector<boost::dynamic_bitset<std::uint64_t>> wide_;
};

/// Partial map from trace variables to traces.
using TraceAssignment = std::map<std::string, FiniteTrace>;

namespace detail {

struct AssignmentEval {
  std::vector<std::string> slots;
  CompiledBody body;
  std::vector<PreparedTrace> prepared;
  std::vector<const PreparedTrace*> tuple;

  AssignmentEval(const Ltl& f, const TraceAssignment& a)
      : slots(names(a)), body(f, slots) {
    prepared.reserve(a.size());
    for (const auto& [var, trace] : a) prepared.emplace_back(trace, body.props());
    for (const auto& p : prepared) tuple.push_back(&p);
  }

  static std::vector<std::string> names(const TraceAssignment& a) {
    std::vector<std::string> out;
    for (const auto& [var, trace] : a) out.push_back(var);
    return out;
  }
};

} // namespace detail

/// T, Pi |= body at position 0. Throws formula_error on an unbound atom.
inline bool ltl_eval(const Ltl& body, const TraceAssignment& a) {
  detail::AssignmentEval e(body, a);
  return BodyEvaluator(e.body).holds(e.tuple);
}

/// Truth of `body` on the suffix of the assignment starting at position `j`.
inline bool ltl_eval_at(const Ltl& body, const TraceAssignment& a, std::size_t j) {
  detail::AssignmentEval e(body, a);
  const auto r = BodyEvaluator(e.body).row(e.tuple);
  return r[std::min(j, r.size() - 1)];
}

} // namespace hypermon
