#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace hypermon;
using hypermon::testing::Gen;

namespace {

const char* kObs = "forall p1. forall p2. (G (i@p1 <-> i@p2)) -> (G (o@p1 <-> o@p2))";

Ltl at(const char* prop, const char* var) { return Ltl::atom(prop, var); }

std::size_t error_offset(const std::string& text) {
  try {
    parse_formula(text);
  } catch (const parse_error& e) {
    return e.offset();
  }
  ADD_FAILURE() << "no parse error for: " << text;
  return 0;
}

} // namespace

TEST(Parse, ObservationalDeterminism) {
  const auto f = parse_formula(kObs);
  ASSERT_EQ(f.prefix.size(), 2U);
  EXPECT_EQ(f.prefix[0].kind, Quantifier::Forall);
  EXPECT_EQ(f.prefix[0].var, "p1");
  EXPECT_EQ(f.prefix[1].var, "p2");
  const Ltl expected = Ltl::implies(Ltl::globally(Ltl::iff(at("i", "p1"), at("i", "p2"))),
                                    Ltl::globally(Ltl::iff(at("o", "p1"), at("o", "p2"))));
  EXPECT_EQ(f.body, expected);
}

TEST(Parse, Reachability) {
  const auto f = parse_formula("exists p. F (s@p & F t@p)");
  EXPECT_EQ(f.body, Ltl::eventually(Ltl::conj(at("s", "p"), Ltl::eventually(at("t", "p")))));
}

TEST(Parse, Precedence) {
  // unary > U/W > & > | > -> > <->
  EXPECT_EQ(parse_body("!a@p U b@p & c@p"),
            Ltl::conj(Ltl::until(Ltl::neg(at("a", "p")), at("b", "p")), at("c", "p")));
  EXPECT_EQ(parse_body("a@p | b@p & c@p"), Ltl::disj(at("a", "p"), Ltl::conj(at("b", "p"), at("c", "p"))));
  EXPECT_EQ(parse_body("a@p -> b@p | c@p"), Ltl::implies(at("a", "p"), Ltl::disj(at("b", "p"), at("c", "p"))));
  EXPECT_EQ(parse_body("a@p <-> b@p -> c@p"), Ltl::iff(at("a", "p"), Ltl::implies(at("b", "p"), at("c", "p"))));
  EXPECT_EQ(parse_body("X F G a@p"), Ltl::next(Ltl::eventually(Ltl::globally(at("a", "p")))));
}

TEST(Parse, Associativity) {
  EXPECT_EQ(parse_body("a@p U b@p U c@p"), Ltl::until(at("a", "p"), Ltl::until(at("b", "p"), at("c", "p"))));
  EXPECT_EQ(parse_body("a@p W b@p U c@p"), Ltl::weak_until(at("a", "p"), Ltl::until(at("b", "p"), at("c", "p"))));
  EXPECT_EQ(parse_body("a@p -> b@p -> c@p"), Ltl::implies(at("a", "p"), Ltl::implies(at("b", "p"), at("c", "p"))));
  EXPECT_EQ(parse_body("a@p & b@p & c@p"), Ltl::conj(Ltl::conj(at("a", "p"), at("b", "p")), at("c", "p")));
}

TEST(Parse, LiteralsAndKeywordProps) {
  EXPECT_EQ(parse_body("true"), Ltl::top());
  EXPECT_EQ(parse_body("false"), Ltl::neg(Ltl::top()));
  // Operator keywords are ordinary propositions when followed by '@'.
  EXPECT_EQ(parse_body("X@p U F@p"), Ltl::until(at("X", "p"), at("F", "p")));
  EXPECT_EQ(parse_body("true@p"), at("true", "p"));
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_formula("forall p. a@q"), parse_error);
  EXPECT_EQ(error_offset("forall p. a@q"), 12U);
  EXPECT_EQ(error_offset("forall p. forall p. a@p"), 17U);
  EXPECT_EQ(error_offset("a@p"), 0U);
  EXPECT_EQ(error_offset("forall p. (a@p"), 14U);
  EXPECT_EQ(error_offset("forall p. a@p $"), 14U);
  EXPECT_EQ(error_offset("forall p. __x@p"), 10U);
  EXPECT_EQ(error_offset("forall p. a@p b@p"), 14U);
  try {
    parse_formula("forall p. a@p &");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.offset(), 15U);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Format, Canonical) {
  EXPECT_EQ(format_body(at("a", "p")), "a@p");
  EXPECT_EQ(format_body(Ltl::until(at("a", "p1"), at("b", "p2"))), "(a@p1 U b@p2)");
  EXPECT_EQ(format_formula(parse_formula("forall p1. forall p2. a@p1 U b@p2")),
            "forall p1. forall p2. (a@p1 U b@p2)");
  const auto obs = parse_formula(kObs);
  EXPECT_EQ(parse_formula(format_formula(obs)).body, obs.body);
}

TEST(Format, RoundTripProperty) {
  Gen g(11);
  for (int i = 0; i < 500; ++i) {
    const auto f = g.formula(3, 5, 3);
    const auto text = format_formula(f);
    const auto back = parse_formula(text);
    ASSERT_EQ(back.body, f.body) << text;
    ASSERT_EQ(back.prefix.size(), f.prefix.size());
    for (std::size_t k = 0; k < f.prefix.size(); ++k) {
      EXPECT_EQ(back.prefix[k].kind, f.prefix[k].kind);
      EXPECT_EQ(back.prefix[k].var, f.prefix[k].var);
    }
  }
}

TEST(Classify, Patterns) {
  auto c = classify(parse_formula(kObs));
  EXPECT_EQ(c.pattern, Pattern::ForallOnly);
  EXPECT_EQ(c.alternation_depth, 0U);
  c = classify(parse_formula("forall a. forall b. exists c. x@a"));
  EXPECT_EQ(c.pattern, Pattern::AE);
  EXPECT_EQ(c.alternation_depth, 1U);
  c = classify(parse_formula("forall a. exists b. forall c. exists d. x@a"));
  EXPECT_EQ(c.pattern, Pattern::AE);
  EXPECT_EQ(c.alternation_depth, 3U);
  EXPECT_EQ(to_string(c), "(AE)3");
  c = classify(parse_formula("exists a. forall b. x@a"));
  EXPECT_EQ(to_string(c), "(EA)1");
  EXPECT_EQ(to_string(classify(parse_formula("exists a. x@a"))), "exists-only");
}

TEST(Classify, DependsOnlyOnPrefix) {
  Gen g(12);
  for (int i = 0; i < 100; ++i) {
    auto f = g.formula(4, 3, 2);
    const auto before = classify(f);
    f.body = g.body(3, {f.prefix.front().var}, 2);
    EXPECT_EQ(classify(f), before);
  }
}

TEST(Dualize, FlipsQuantifiersAndNegates) {
  const auto f = parse_formula("forall p. forall q. a@p U b@q");
  const auto g = dualize(f);
  EXPECT_EQ(g.prefix[0].kind, Quantifier::Exists);
  EXPECT_EQ(g.prefix[1].kind, Quantifier::Exists);
  EXPECT_EQ(g.body, Ltl::neg(f.body));
  const auto h = dualize(parse_formula("exists p. a@p"));
  EXPECT_EQ(h.prefix[0].kind, Quantifier::Forall);
  EXPECT_EQ(strip_double_negation(dualize(dualize(f)).body), f.body);
}

TEST(Validate, ClosedAndUnique) {
  HyperFormula f;
  f.prefix = {{Quantifier::Forall, "p"}};
  f.body = at("a", "q");
  EXPECT_THROW(validate(f), formula_error);
  f.prefix.push_back({Quantifier::Exists, "p"});
  f.body = at("a", "p");
  EXPECT_THROW(validate(f), formula_error);
  f.prefix.pop_back();
  EXPECT_NO_THROW(validate(f));
}

TEST(Ltl, StructuralHashAndSize) {
  const Ltl a = parse_body("a@p U (b@q & X c@p)");
  const Ltl b = parse_body("a@p U (b@q & X c@p)");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a, parse_body("a@p U (b@q & X c@q)"));
  EXPECT_EQ(a.size(), 6U);
  EXPECT_EQ(free_vars(a), (std::set<std::string>{"p", "q"}));
  EXPECT_EQ(props_of(a), (std::set<std::string>{"a", "b", "c"}));
}
