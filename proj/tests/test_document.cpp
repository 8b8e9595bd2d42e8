#include <gtest/gtest.h>

#include "support/fixtures.hpp"

namespace gpk {
namespace {

using test::R;

template <typename T>
T parse_as(const std::string& text, ParseOptions options = {}) {
  return std::get<T>(parse_document(text, options));
}

std::string parse_error(const std::string& text, ParseOptions options = {}) {
  try {
    parse_document(text, options);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

TEST(Document, ProbabilityFile) {
  const auto p = parse_as<ProbabilityMeasure>("kind: probability\nframe: a b\n{a} 1/4\n{b} 3/4\n");
  EXPECT_EQ(p.weights(), (std::vector<Rational>{R("1/4"), R("3/4")}));
}

TEST(Document, MassesMustSumToOne) {
  EXPECT_EQ(parse_error("kind: mass\nframe: a b\n{a} 1/2\n{b} 2/5\n"), "masses sum to 9/10, expected 1");
}

TEST(Document, CommentsBlankLinesAndSignedMasses) {
  const auto m = parse_as<SignedMassFunction>(
      "# pairs\n\nkind: mass   # trailing\nframe: a b c\n{a,b} 1/2\n{a,c} 1/2\n{b,c} 1/2\n{a,b,c} -1/2\n");
  EXPECT_EQ(m, test::pairs_capacity().mobius());
}

TEST(Document, RoundTripsEveryKind) {
  const std::vector<Document> docs{
      test::pairs_capacity(),
      test::pairs_capacity().mobius(),
      test::probability(test::abc(), {"1/6", "0", "5/6"}),
      test::two_point_model(),
      canonical_joint(test::two_point_model(), ProbabilityMeasure::uniform(test::ab())),
  };
  for (const Document& d : docs) {
    const std::string text = emit(d);
    EXPECT_EQ(parse_document(text), d) << text;
    EXPECT_EQ(emit(parse_document(text)), text);
  }
}

TEST(Document, RoundTripsRandomCapacities) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Capacity c = lab::gen_capacity(Frame::of_size(1 + seed % 5), lab::CapacityKind::two_monotone, seed);
    EXPECT_EQ(parse_as<Capacity>(emit(c)), c);
  }
}

TEST(Document, PairsCapacityCanonicalOrder) {
  const auto c = parse_as<Capacity>("kind: capacity\nframe: a b c\n{a,b,c} 1\n{b,c} 1/2\n{a,c} 1/2\n{a,b} 2/4\n");
  EXPECT_EQ(c, test::pairs_capacity());
  EXPECT_EQ(emit(c),
            "kind: capacity\nframe: a b c\n{a} 0\n{b} 0\n{c} 0\n{a,b} 1/2\n{a,c} 1/2\n{b,c} 1/2\n{a,b,c} 1\n");
}

TEST(Document, ModelAndJointSyntax) {
  const auto model = parse_as<DempsterModel>("kind: model\nframe: a b\naux: y1 y2\ny1 1/2 -> {a}\ny2 1/2 -> {a,b}\n");
  EXPECT_EQ(model, test::two_point_model());
  const auto q = parse_as<JointMeasure>("kind: joint\nframe: a b\naux: y1 y2\n(a,y1) 1/2\n(b,y2) 1/2\n");
  EXPECT_EQ(q.at(0, 0), R("1/2"));
  EXPECT_EQ(q.at(1, 1), R("1/2"));
}

TEST(Document, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error("kind: capacity\nframe: a b\n{a} 1/2\n{a} 1/3\n{a,b} 1\n"), "line 4: duplicate assignment to {a}");
  EXPECT_EQ(parse_error("kind: capacity\nframe: a b\n{z} 1/2\n{a,b} 1\n"), "line 3: unknown label 'z'");
  EXPECT_NE(parse_error("kind: capacity\nframe: a b\n{a} 0.5\n{a,b} 1\n").find("line 3"), std::string::npos);
  EXPECT_NE(parse_error("kind: probability\nframe: a b\n{a,b} 1\n").find("singletons only"), std::string::npos);
  EXPECT_NE(parse_error("kind: mass\nframe: a b\n{} 1\n").find("empty set"), std::string::npos);
  EXPECT_NE(parse_error("kind: capacity\nframe: a b\n{a} 1/2\n").find("must be assigned 1"), std::string::npos);
  EXPECT_NE(parse_error("kind: thing\nframe: a\n").find("unknown kind"), std::string::npos);
  EXPECT_NE(parse_error("frame: a b\n").find("kind"), std::string::npos);
  EXPECT_NE(parse_error("kind: capacity\nframe: a a\n{a} 1\n").find("duplicate"), std::string::npos);
  EXPECT_NE(parse_error("kind: model\nframe: a b\naux: y1 y2\ny1 1 -> {a}\n").find("y2"), std::string::npos);
  EXPECT_NE(parse_error("kind: model\nframe: a b\naux: y1\ny1 1 -> {}\n").find("nonempty"), std::string::npos);
  EXPECT_NE(parse_error("kind: probability\nframe: a b\n{a} 1/2\n{b} 1/3\n").find("5/6"), std::string::npos);
}

TEST(Document, OutOfRangeCapacityNeedsPermission) {
  const std::string text = "kind: capacity\nframe: a b\n{a} 3/2\n{a,b} 1\n";
  EXPECT_NE(parse_error(text).find("line 3"), std::string::npos);
  const auto c = parse_as<Capacity>(text, ParseOptions{true});
  EXPECT_EQ(c[1], R("3/2"));
}

TEST(Rational, ParsingIsStrict) {
  Rational r;
  EXPECT_TRUE(parse_rational("-6/8", r));
  EXPECT_EQ(r, R("-3/4"));
  EXPECT_TRUE(parse_rational("+7", r));
  EXPECT_EQ(r, 7);
  EXPECT_FALSE(parse_rational("0.5", r));
  EXPECT_FALSE(parse_rational("1/0", r));
  EXPECT_FALSE(parse_rational("1/", r));
  EXPECT_FALSE(parse_rational("", r));
  EXPECT_FALSE(parse_rational("1/-2", r));
  EXPECT_EQ(to_string(make_rational(4, 6)), "2/3");
}

}  // namespace
}  // namespace gpk
