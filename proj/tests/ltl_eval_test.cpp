#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace hypermon;
using hypermon::testing::Gen;

namespace {

TraceAssignment assign(std::initializer_list<std::pair<const char*, const char*>> xs) {
  TraceAssignment a;
  for (auto [var, line] : xs) a.emplace(var, parse_trace(line));
  return a;
}

bool reference(const Ltl& body, const TraceAssignment& a, std::size_t j = 0) {
  std::map<std::string, const FiniteTrace*> pi;
  std::size_t horizon = 0;
  for (const auto& [var, t] : a) {
    pi.emplace(var, &t);
    horizon = std::max(horizon, t.size());
  }
  return detail::SuffixSemantics(horizon + 1).sat(body, pi, j);
}

TraceAssignment random_assignment(Gen& g, std::size_t vars, std::size_t max_len, std::size_t props) {
  TraceAssignment a;
  for (std::size_t i = 0; i < vars; ++i) a.emplace(Gen::var(i), g.trace(g.letter(props), max_len, props));
  return a;
}

std::vector<std::string> var_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(Gen::var(i));
  return out;
}

} // namespace

TEST(LtlEval, WorkedUntilExamples) {
  const Ltl body = parse_body("a@p1 U b@p2");
  EXPECT_FALSE(ltl_eval(body, assign({{"p1", "a;b"}, {"p2", "a;a;b"}})));
  EXPECT_TRUE(ltl_eval(body, assign({{"p1", "a;a;b"}, {"p2", "a;a;b"}})));
  EXPECT_TRUE(ltl_eval(body, assign({{"p1", "a;b"}, {"p2", "a;b"}})));
}

TEST(LtlEval, TwoTraceTree) {
  const Ltl fx = parse_body("F x@p");
  EXPECT_TRUE(ltl_eval(fx, assign({{"p", ".;x"}})));
  EXPECT_FALSE(ltl_eval(fx, assign({{"p", ".;."}})));
  EXPECT_TRUE(ltl_eval(parse_body("G true"), assign({{"p", "a;b;c"}})));
}

TEST(LtlEval, TailSemantics) {
  // Past the end the last letter repeats, so X, G and U see it forever.
  const auto a = assign({{"p", "a;b"}});
  EXPECT_TRUE(ltl_eval(parse_body("X X X X b@p"), a));
  EXPECT_TRUE(ltl_eval(parse_body("F G b@p"), a));
  EXPECT_FALSE(ltl_eval(parse_body("G F a@p"), a));
  EXPECT_TRUE(ltl_eval(parse_body("X (b@p W a@p)"), a));
  EXPECT_FALSE(ltl_eval(parse_body("X (b@p U a@p)"), a));
  // Shorter traces stutter-pad against longer ones.
  EXPECT_TRUE(ltl_eval(parse_body("G (x@p -> y@q) & F !y@q"), assign({{"p", "x;."}, {"q", "y;y;y;."}})));
}

TEST(LtlEval, UnboundVariable) {
  EXPECT_THROW(ltl_eval(parse_body("a@q"), assign({{"p", "a"}})), formula_error);
}

TEST(LtlEval, StutterInvariance) {
  Gen g(51);
  for (int i = 0; i < 400; ++i) {
    auto a = random_assignment(g, 2, 6, 3);
    const Ltl body = g.body(4, var_names(2), 3);
    const bool before = ltl_eval(body, a);
    for (auto& [var, t] : a) t = t.stuttered(g.below(4));
    EXPECT_EQ(ltl_eval(body, a), before) << format_body(body);
  }
}

TEST(LtlEval, AgreesWithSuffixSemantics) {
  Gen g(52);
  for (int i = 0; i < 1500; ++i) {
    const std::size_t vars = g.between(1, 3);
    const auto a = random_assignment(g, vars, 7, 3);
    const Ltl body = g.body(5, var_names(vars), 3);
    ASSERT_EQ(ltl_eval(body, a), reference(body, a)) << format_body(body);
  }
}

TEST(LtlEval, LongTracesUseWideRows) {
  // Horizons past 64 positions take the multi-word path.
  Gen g(53);
  for (int i = 0; i < 150; ++i) {
    const auto a = random_assignment(g, 2, 150, 2);
    const Ltl body = g.body(4, var_names(2), 2);
    ASSERT_EQ(ltl_eval(body, a), reference(body, a)) << format_body(body);
  }
  std::string line = "a";
  for (int i = 0; i < 99; ++i) line += ";a";
  line += ";b";
  const auto a = assign({{"p", line.c_str()}});
  EXPECT_TRUE(ltl_eval(parse_body("a@p U b@p"), a));
  EXPECT_FALSE(ltl_eval(parse_body("G a@p"), a));
  EXPECT_TRUE(ltl_eval_at(parse_body("b@p"), a, 100));
  EXPECT_FALSE(ltl_eval_at(parse_body("b@p"), a, 99));
  EXPECT_TRUE(ltl_eval_at(parse_body("b@p"), a, 5000));
}

TEST(LtlEval, ExpansionLaw) {
  Gen g(54);
  for (int i = 0; i < 300; ++i) {
    const auto a = random_assignment(g, 2, 6, 2);
    const auto vars = var_names(2);
    const Ltl phi = g.body(2, vars, 2), psi = g.body(2, vars, 2);
    const Ltl u = Ltl::until(phi, psi);
    std::size_t n = 0;
    for (const auto& [v, t] : a) n = std::max(n, t.size());
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const bool rhs = ltl_eval_at(psi, a, j) || (ltl_eval_at(phi, a, j) && ltl_eval_at(u, a, j + 1));
      EXPECT_EQ(ltl_eval_at(u, a, j), rhs);
    }
  }
}

TEST(LtlEval, DerivedOperatorExpansions) {
  Gen g(55);
  for (int i = 0; i < 300; ++i) {
    const auto a = random_assignment(g, 2, 6, 2);
    const auto vars = var_names(2);
    const Ltl phi = g.body(3, vars, 2), psi = g.body(3, vars, 2);
    const Ltl f_exp = Ltl::until(Ltl::top(), phi);
    const Ltl g_exp = Ltl::neg(Ltl::until(Ltl::top(), Ltl::neg(phi)));
    const Ltl w_exp = Ltl::disj(Ltl::until(phi, psi), g_exp);
    EXPECT_EQ(ltl_eval(Ltl::eventually(phi), a), ltl_eval(f_exp, a));
    EXPECT_EQ(ltl_eval(Ltl::globally(phi), a), ltl_eval(g_exp, a));
    EXPECT_EQ(ltl_eval(Ltl::weak_until(phi, psi), a), ltl_eval(w_exp, a));
  }
}
