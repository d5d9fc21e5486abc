#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace hypermon;

TEST(Letter, CanonicalOrder) {
  const Letter l{"b", "a", "b"};
  EXPECT_EQ(l.props(), (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(l.contains("a"));
  EXPECT_FALSE(l.contains("c"));
  EXPECT_EQ(format_letter(l), "a,b");
  EXPECT_EQ(format_letter(Letter{}), ".");
}

TEST(FiniteTrace, StutterEquality) {
  const FiniteTrace t{Letter{"a"}, Letter{"b"}};
  const FiniteTrace u{Letter{"a"}, Letter{"b"}, Letter{"b"}, Letter{"b"}};
  EXPECT_EQ(t, u);
  EXPECT_EQ(u.normalized().size(), 2U);
  EXPECT_EQ(u.normal_size(), 2U);
  EXPECT_EQ(t.at(7), Letter{"b"});
  EXPECT_NE(t, (FiniteTrace{Letter{"a"}, Letter{"a"}, Letter{"b"}}));
  EXPECT_EQ(t.stuttered(3), u);
  EXPECT_THROW(FiniteTrace(std::vector<Letter>{}), invalid_argument);
}

TEST(TraceFormat, ParseLine) {
  const auto t = parse_trace("a;a;b");
  EXPECT_EQ(t, (FiniteTrace{Letter{"a"}, Letter{"a"}, Letter{"b"}}));
  EXPECT_EQ(parse_trace(" . ; x , y "), (FiniteTrace{Letter{}, Letter{"x", "y"}}));
  EXPECT_EQ(format_trace(parse_trace("b,a;.")), "a,b;.");
}

TEST(TraceFormat, ParseErrorsCarryOffsets) {
  try {
    parse_trace("a;;b");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.offset(), 2U);
  }
  try {
    parse_trace("a;b,9x");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.offset(), 4U);
  }
  EXPECT_THROW(parse_trace("a;__x"), parse_error);
}

TEST(TraceFormat, FileWithCommentsAndBlankLines) {
  const auto ts = parse_traces("# header\na;b\n\n  \n.;a\n# tail\n");
  ASSERT_EQ(ts.size(), 2U);
  EXPECT_EQ(format_trace(ts[1]), ".;a");
  try {
    parse_traces("a\nb;;c\n");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.offset(), 4U); // byte offset into the whole file
  }
}

TEST(TraceFormat, RoundTripProperty) {
  hypermon::testing::Gen g(21);
  for (int i = 0; i < 300; ++i) {
    const auto t = g.trace(g.letter(3), 6, 3);
    EXPECT_EQ(parse_trace(format_trace(t)), t);
  }
}

TEST(TraceFormat, DedupKeepsFirst) {
  const auto ts = dedup_traces({parse_trace("a;b"), parse_trace("a"), parse_trace("a;b;b")});
  ASSERT_EQ(ts.size(), 2U);
  EXPECT_EQ(format_trace(ts[0]), "a;b");
}
