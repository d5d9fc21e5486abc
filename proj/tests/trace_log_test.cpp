#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace hypermon;
using hypermon::testing::Gen;
using hypermon::testing::path_traces;
using hypermon::testing::trace_set;

namespace {

std::vector<FiniteTrace> traces(std::initializer_list<const char*> lines) {
  std::vector<FiniteTrace> out;
  for (const char* l : lines) out.push_back(parse_trace(l));
  return out;
}

/// Number of distinct suffix languages over the reachable states: the size
/// of the minimal deterministic structure, computed without the library's
/// congruence.
std::size_t suffix_classes(const KripkeStructure& k) {
  std::set<std::set<std::string>> langs;
  std::vector<char> seen(k.size(), 0);
  std::function<void(StateId)> visit = [&](StateId s) {
    if (seen[s]) return;
    seen[s] = 1;
    std::vector<StateId> succ;
    for (StateId t : k.successors(s)) succ.push_back(t);
    const KripkeStructure rooted(k.labels(), s, k.edges(), k.ap());
    langs.insert(path_traces(rooted));
    for (StateId t : succ)
      if (t != s) visit(t);
  };
  visit(k.init());
  return langs.size();
}

} // namespace

TEST(BuildTree, SharedPrefix) {
  const auto log = build_tree(traces({"a;a;b", "a;b"}));
  const auto& k = log.structure();
  EXPECT_EQ(k.size(), 4U);
  EXPECT_EQ(classify_frame(k), FrameClass::Tree);
  EXPECT_EQ(path_traces(k), (std::set<std::string>{"a;a;b", "a;b"}));
  EXPECT_EQ(log.trace_count(), 2U);
  EXPECT_EQ(format_trace(log.trace(1)), "a;b");
  EXPECT_EQ(log.path(0).size(), 3U);
}

TEST(BuildTree, SingleTraceIsPath) {
  const auto log = build_tree(traces({"a;b;c;d"}));
  EXPECT_EQ(log.structure().size(), 4U);
  EXPECT_EQ(log.structure().edge_count(), 4U);
  EXPECT_TRUE(log.structure().is_terminal(3));
}

TEST(BuildTree, TraceEndingInsideAnother) {
  // "a;b" ends where "a;b;c" continues: the inner node keeps a stutter leaf.
  const auto log = build_tree(traces({"a;b;c", "a;b"}));
  EXPECT_EQ(path_traces(log.structure()), (std::set<std::string>{"a;b;c", "a;b"}));
  EXPECT_EQ(log.structure().size(), 4U);
  // A trace that only runs through an existing prefix adds nothing else.
  EXPECT_EQ(path_traces(build_tree(traces({"a;b;c"})).structure()), (std::set<std::string>{"a;b;c"}));
}

TEST(BuildTree, Errors) {
  try {
    build_tree(traces({"a;b", "b;a"}));
    FAIL();
  } catch (const first_letter_mismatch& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("{b}"), std::string::npos);
    EXPECT_NE(msg.find("{a}"), std::string::npos);
  }
  EXPECT_THROW(build_tree({}), empty_input);
}

TEST(BuildTree, DeduplicatesStutterEquivalent) {
  const auto log = build_tree(traces({"a;b", "a;b;b;b", "a;b"}));
  EXPECT_EQ(log.trace_count(), 1U);
  EXPECT_EQ(log.structure().size(), 2U);
}

TEST(BuildTree, TraceSetProperty) {
  Gen g(41);
  for (int i = 0; i < 500; ++i) {
    const auto ts = g.traces(8, 6, 3);
    const auto log = build_tree(ts);
    ASSERT_EQ(classify_frame(log.structure()), FrameClass::Tree);
    EXPECT_EQ(trace_set(collect_traces(log.structure())), trace_set(ts));
    EXPECT_EQ(trace_set(log.traces()), trace_set(ts));
    for (std::size_t id = 0; id < log.trace_count(); ++id) EXPECT_EQ(log.trace(id), log.ingested()[id]);
  }
}

TEST(BuildTree, StutteringInputLeavesStructureUnchanged) {
  Gen g(42);
  for (int i = 0; i < 200; ++i) {
    auto ts = g.traces(6, 5, 2);
    const auto before = to_json(build_tree(ts).structure());
    for (auto& t : ts)
      if (g.coin()) t = t.stuttered(g.between(1, 3));
    EXPECT_EQ(to_json(build_tree(ts).structure()), before);
  }
}

TEST(Minimize, MergesSharedLeaves) {
  // {a}{a}{b} and {a}{b}{b} = {a}{b}: tree root -> a -> b, root -> b. The
  // two b-leaves share their suffix language; the middle a does not.
  const auto tree = build_tree(traces({"a;a;b", "a;b;b"}));
  EXPECT_EQ(tree.structure().size(), 4U);
  const auto dag = minimize_to_dag(tree);
  EXPECT_EQ(dag.mode(), LogMode::Dag);
  EXPECT_EQ(dag.structure().size(), 3U);
  EXPECT_EQ(suffix_classes(tree.structure()), 3U);
  EXPECT_EQ(classify_frame(dag.structure()), FrameClass::Acyclic);
  EXPECT_EQ(path_traces(dag.structure()), path_traces(tree.structure()));
}

TEST(Minimize, MinimalPathUnchanged) {
  const auto tree = build_tree(traces({"a;b;c"}));
  EXPECT_EQ(minimize_to_dag(tree).structure().size(), 3U);
}

TEST(Minimize, BranchingTraceSet) {
  const auto tree = build_tree(traces({"a;a;b", "a;b"}));
  const auto dag = minimize_to_dag(tree);
  EXPECT_LE(dag.structure().size(), tree.structure().size());
  EXPECT_EQ(path_traces(dag.structure()), (std::set<std::string>{"a;a;b", "a;b"}));
}

TEST(Minimize, RejectsGeneralFrames) {
  EXPECT_THROW(minimize_structure(KripkeStructure({Letter{}, Letter{}}, 0, {{0, 1}, {1, 0}})), unsupported_frame);
}

TEST(Minimize, TreeLogProperties) {
  Gen g(43);
  for (int i = 0; i < 300; ++i) {
    const auto tree = build_tree(g.traces(8, 6, 2));
    const auto dag = minimize_to_dag(tree);
    const auto& k = dag.structure();
    EXPECT_TRUE(is_acyclic(classify_frame(k)));
    EXPECT_LE(k.size(), tree.structure().size());
    EXPECT_EQ(path_traces(k), path_traces(tree.structure()));
    EXPECT_EQ(k.size(), suffix_classes(tree.structure()));
    // Idempotent.
    EXPECT_EQ(to_json(minimize_structure(k)), to_json(k));
    // Ids survive: every trace can still be walked by its letters.
    for (std::size_t id = 0; id < dag.trace_count(); ++id) EXPECT_EQ(dag.trace(id), tree.trace(id));
  }
}

TEST(Minimize, ArbitraryAcyclicInput) {
  Gen g(44);
  for (int i = 0; i < 300; ++i) {
    const auto k = g.acyclic(8, 2);
    const auto m = minimize_structure(k);
    EXPECT_TRUE(is_acyclic(classify_frame(m)));
    EXPECT_LE(m.size(), k.size());
    EXPECT_EQ(path_traces(m), path_traces(k));
  }
}

TEST(TraceTrie, InsertReportsNovelty) {
  TraceTrie trie;
  EXPECT_TRUE(trie.insert(parse_trace("i;i,o")));
  EXPECT_TRUE(trie.insert(parse_trace("i;i")));
  EXPECT_FALSE(trie.insert(parse_trace("i")));
  EXPECT_FALSE(trie.insert(parse_trace("i;i,o;i,o")));
  EXPECT_EQ(path_traces(trie.snapshot()), (std::set<std::string>{"i;i,o", "i"}));
  EXPECT_THROW(trie.insert(parse_trace("o")), first_letter_mismatch);
}
