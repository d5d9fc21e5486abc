#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace hypermon;
using hypermon::testing::Gen;

namespace {

KripkeStructure branching() {
  return KripkeStructure({Letter{"a"}, Letter{"a"}, Letter{"b"}, Letter{"b"}}, 0,
                         {{0, 1}, {0, 3}, {1, 2}, {1, 3}, {2, 2}, {3, 3}});
}

const char* kObs = "forall p1. forall p2. G (i@p1 <-> i@p2) -> G (o@p1 <-> o@p2)";

std::vector<FiniteTrace> parse_all(std::initializer_list<const char*> lines) {
  std::vector<FiniteTrace> out;
  for (const char* l : lines) out.push_back(parse_trace(l));
  return out;
}

/// Replays a witness: with the outermost block fixed, the rest of the
/// formula must reproduce the verdict.
void expect_witness_valid(std::span<const FiniteTrace> ts, const HyperFormula& f, const Verdict& v) {
  const bool exists = f.prefix.front().kind == Quantifier::Exists;
  ASSERT_EQ(v.witness.has_value(), v.holds == exists);
  if (!v.witness) return;
  const auto block = block_length(f.prefix);
  ASSERT_EQ(v.witness->size(), block);
  std::vector<std::size_t> fixed;
  for (std::size_t i = 0; i < block; ++i) {
    EXPECT_EQ((*v.witness)[i].var, f.prefix[i].var);
    fixed.push_back((*v.witness)[i].trace);
  }
  EXPECT_EQ(check_from(ts, f, fixed).holds, v.holds);
}

} // namespace

TEST(Check, BranchingUniversalUntil) {
  const auto k = branching();
  const auto v = check(k, parse_formula("forall p1. forall p2. a@p1 U b@p2"));
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.witness);
  const auto ts = collect_traces(k);
  EXPECT_EQ(format_trace(ts[(*v.witness)[0].trace]), "a;b");
  EXPECT_EQ(format_trace(ts[(*v.witness)[1].trace]), "a;a;b");
  const auto j = to_json(v);
  EXPECT_EQ(j["holds"], false);
  EXPECT_EQ(j["witness"]["p1"], 1);
  EXPECT_EQ(j["witness"]["p2"], 0);
  EXPECT_TRUE(j["stats"].contains("tuples_evaluated"));
  EXPECT_TRUE(j["stats"].contains("cache_hits"));
}

TEST(Check, BranchingOtherFormulas) {
  const auto k = branching();
  EXPECT_TRUE(check(k, parse_formula("exists p1. exists p2. a@p1 U b@p2")).holds);
  EXPECT_TRUE(check(k, parse_formula("exists p. F b@p")).holds);
  EXPECT_TRUE(check(k, parse_formula("forall p. F b@p")).holds);
  EXPECT_EQ(check(k, parse_formula("forall p1. exists p2. a@p1 U b@p2")).holds,
            brute_force_check(collect_traces(k), parse_formula("forall p1. exists p2. a@p1 U b@p2")));
  const auto none = to_json(check(k, parse_formula("forall p. F b@p")));
  EXPECT_TRUE(none["witness"].is_null());
}

TEST(Check, SingleTraceObservationalDeterminism) {
  const auto ts = parse_all({"i;i,o;."});
  EXPECT_TRUE(check(ts, parse_formula(kObs)).holds);
}

TEST(Check, ObservationalDeterminismViolation) {
  const auto ts = parse_all({"i;i,o", "i;i"});
  const auto v = check(ts, parse_formula(kObs));
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.witness);
  EXPECT_NE((*v.witness)[0].trace, (*v.witness)[1].trace);
}

TEST(Check, EmptySetPolicy) {
  const std::vector<FiniteTrace> none;
  EXPECT_THROW(check(none, parse_formula(kObs)), empty_trace_set);
  CheckOptions vacuous{EmptySetPolicy::Vacuous, nullptr};
  EXPECT_TRUE(check(none, parse_formula(kObs), vacuous).holds);
  EXPECT_FALSE(check(none, parse_formula("exists p. F x@p"), vacuous).holds);
  EXPECT_FALSE(check(none, parse_formula("exists p. forall q. x@p"), vacuous).holds);
}

TEST(Check, RejectsGeneralFrames) {
  const KripkeStructure cyc({Letter{}, Letter{}}, 0, {{0, 1}, {1, 0}});
  EXPECT_THROW(check(cyc, parse_formula("exists p. F x@p")), unsupported_frame);
}

TEST(Check, ShortCircuits) {
  std::vector<FiniteTrace> ts;
  for (int i = 0; i < 20; ++i) ts.push_back(parse_trace(("a;" + std::string(i % 2 ? "b" : "c")).c_str()));
  // The first pair already decides.
  const auto v = check(ts, parse_formula("exists p. exists q. a@p"));
  EXPECT_EQ(v.stats.tuples_evaluated, 1U);
  const auto w = check(ts, parse_formula("forall p. forall q. b@p"));
  EXPECT_EQ(w.stats.tuples_evaluated, 1U);
}

TEST(Check, OracleEquivalence) {
  Gen g(61);
  for (int i = 0; i < 600; ++i) {
    const auto ts = g.traces(10, 6, 3);
    const auto f = g.formula(3, 4, 3);
    const auto v = check(ts, f);
    ASSERT_EQ(v.holds, brute_force_check(ts, f)) << format_formula(f);
    expect_witness_valid(ts, f, v);
  }
}

TEST(Check, DualityFlipsEveryVerdict) {
  Gen g(62);
  for (int i = 0; i < 300; ++i) {
    const auto k = g.acyclic(6, 2);
    const auto f = g.formula(3, 4, 2);
    EXPECT_NE(check(k, f).holds, check(k, dualize(f)).holds) << format_formula(f);
  }
}

TEST(Check, MonotoneFragments) {
  Gen g(63);
  for (int i = 0; i < 300; ++i) {
    auto ts = g.traces(8, 5, 2);
    const auto f = g.alternation_free(3, 4, 2);
    const std::size_t cut = g.between(1, ts.size());
    const std::vector<FiniteTrace> sub(ts.begin(), ts.begin() + static_cast<std::ptrdiff_t>(cut));
    const bool whole = check(ts, f).holds, part = check(sub, f).holds;
    if (f.prefix.front().kind == Quantifier::Forall && whole) {
      EXPECT_TRUE(part);
    }
    if (f.prefix.front().kind == Quantifier::Exists && part) {
      EXPECT_TRUE(whole);
    }
  }
}

TEST(Check, StutterInvariance) {
  Gen g(64);
  for (int i = 0; i < 300; ++i) {
    auto ts = g.traces(6, 6, 2);
    const auto f = g.formula(3, 4, 2);
    const bool before = check(ts, f).holds;
    for (auto& t : ts)
      if (g.coin()) t = t.stuttered(g.between(1, 4));
    EXPECT_EQ(check(ts, f).holds, before);
  }
}

TEST(Check, CacheDoesNotChangeVerdicts) {
  Gen g(65);
  EvalCache cache;
  for (int i = 0; i < 200; ++i) {
    const auto ts = g.traces(8, 5, 2);
    const auto f = g.formula(3, 4, 2);
    cache.clear();
    const auto cold = check(ts, f);
    const auto warm1 = check(ts, f, {EmptySetPolicy::Error, &cache});
    const auto warm2 = check(ts, f, {EmptySetPolicy::Error, &cache});
    EXPECT_EQ(cold.holds, warm1.holds);
    EXPECT_EQ(cold.holds, warm2.holds);
    EXPECT_EQ(warm2.stats.tuples_evaluated, 0U);
    EXPECT_EQ(warm2.stats.cache_hits, cold.stats.tuples_evaluated);
  }
}

TEST(Check, CacheKeysIncludeVariableSlots) {
  // Same body, different variable order: must not share cache entries.
  EvalCache cache;
  const auto ts = parse_all({"a;b", "a;a"});
  const CheckOptions opts{EmptySetPolicy::Error, &cache};
  const auto f = parse_formula("forall p. forall q. F b@p -> F b@q");
  const auto g = parse_formula("forall q. forall p. F b@p -> F b@q");
  EXPECT_EQ(check(ts, f, opts).holds, brute_force_check(ts, f));
  EXPECT_EQ(check(ts, g, opts).holds, brute_force_check(ts, g));
}

TEST(BruteForce, Guards) {
  EXPECT_THROW(brute_force_check({}, parse_formula("exists p. a@p")), empty_trace_set);
  std::vector<FiniteTrace> many(101, parse_trace("a"));
  EXPECT_THROW(brute_force_check(many, parse_formula("forall a. forall b. forall c. x@a")), guard_exceeded);
  EXPECT_TRUE(brute_force_check(parse_all({"x;y"}), parse_formula("forall p. x@p")));
  EXPECT_FALSE(brute_force_check(parse_all({"x;y"}), parse_formula("forall p. y@p")));
}
