#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace gpk {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

std::string sample(const std::string& name) { return std::string(GPK_SAMPLES_DIR) + "/" + name; }

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path_ = (std::filesystem::temp_directory_path() /
             ("gpk_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".txt"))
                .string();
    std::ofstream(path_) << contents;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

TEST(Cli, CheckTwoMonotoneHolds) {
  const Outcome r = run({"check", "--property", "2-monotone", sample("pairs.cap")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "2-monotone: true\n");
}

TEST(Cli, CheckThreeMonotoneNamesTheTriple) {
  for (const auto& args : {std::vector<std::string>{"check", "--property", "3-monotone", sample("pairs.cap")},
                           std::vector<std::string>{"check", "--property", "k-monotone", "3", sample("pairs.cap")}}) {
    const Outcome r = run(args);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("3-monotone: false"), std::string::npos);
    EXPECT_NE(r.out.find("violation: {a,b} {a,c} {b,c}"), std::string::npos);
  }
}

TEST(Cli, CheckOtherProperties) {
  EXPECT_EQ(run({"check", "--property", "coherent", sample("pairs.cap")}).code, 0);
  EXPECT_EQ(run({"check", "--property", "belief", sample("belief.cap")}).code, 0);
  const Outcome belief = run({"check", "--property", "belief", sample("pairs.cap")});
  EXPECT_EQ(belief.code, 2);
  EXPECT_NE(belief.out.find("m({a,b,c}) = -1/2"), std::string::npos);
  EXPECT_EQ(run({"check", "--property", "1-monotone", sample("pairs.cap")}).code, 1);
  EXPECT_EQ(run({"check", "--property", "pretty", sample("pairs.cap")}).code, 1);
}

TEST(Cli, CheckMonotoneViolation) {
  TempFile f("kind: capacity\nframe: a b c\n{a} 1/2\n{a,b} 1/4\n{a,c} 1/2\n{a,b,c} 1\n");
  const Outcome r = run({"check", "--property", "monotone", f.path()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("{a} subset of {a,b} but 1/2 > 1/4"), std::string::npos);
}

TEST(Cli, BayesConditioningOnSplitBelief) {
  const Outcome r = run({"condition", "--rule", "bayes", "--event", "{a,b}", sample("belief.cap")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\n{a} 1/2\n"), std::string::npos);
  // The output parses back as a capacity.
  EXPECT_NO_THROW(std::get<Capacity>(parse_document(r.out)));
}

TEST(Cli, UndefinedConditioningExitsThree) {
  TempFile f("kind: probability\nframe: a b\n{a} 1\n{b} 0\n");
  const Outcome r = run({"condition", "--rule", "bayes", "--event", "{b}", f.path()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("undefined"), std::string::npos);
}

TEST(Cli, TransformRoundTrip) {
  const Outcome m = run({"transform", "--mobius", sample("pairs.cap")});
  ASSERT_EQ(m.code, 0);
  EXPECT_NE(m.out.find("{a,b,c} -1/2"), std::string::npos);
  TempFile f(m.out);
  const Outcome z = run({"transform", "--zeta", f.path()});
  ASSERT_EQ(z.code, 0);
  EXPECT_EQ(std::get<Capacity>(parse_document(z.out)), std::get<Capacity>(parse_document(
                                                           "kind: capacity\nframe: a b c\n{a,b} 1/2\n{a,c} 1/2\n{b,c} 1/2\n{a,b,c} 1\n")));
  EXPECT_EQ(run({"transform", sample("pairs.cap")}).code, 1);
}

TEST(Cli, ProjectEmitsAllThreeFunctions) {
  const Outcome r = run({"project", sample("sensor.model")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("kind: mass"), std::string::npos);
  EXPECT_NE(r.out.find("---"), std::string::npos);
  const Outcome b = run({"project", "--emit", "belief", sample("sensor.model")});
  EXPECT_EQ(std::get<Capacity>(parse_document(b.out))[1], make_rational(1, 2));
}

TEST(Cli, ReviseValidAndInvalid) {
  const Outcome ok = run({"revise", "--mass", sample("pairs.cap"), sample("uniform3.prob")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(std::get<ProbabilityMeasure>(parse_document(ok.out)), ProbabilityMeasure::uniform(Frame::of_size(3)));

  TempFile c("kind: capacity\nframe: a b c\n{a} 1/2\n{a,b} 1/4\n{a,c} 1/2\n{a,b,c} 1\n");
  TempFile p("kind: probability\nframe: a b c\n{a} 1/8\n{b} 1/8\n{c} 3/4\n");
  const Outcome bad = run({"revise", "--mass", c.path(), p.path()});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("valid: false"), std::string::npos);
  EXPECT_NE(bad.out.find("weight {b}: -1/32"), std::string::npos);

  const Outcome jeffrey = run({"revise", "--jeffrey", sample("jeffrey.mass"), sample("uniform3.prob")});
  EXPECT_EQ(jeffrey.code, 0);
  EXPECT_EQ(run({"revise", sample("uniform3.prob")}).code, 1);
}

TEST(Cli, CombineAndEnvelope) {
  const Outcome c = run({"combine", "--rule", "bar", "--level", "belief", sample("belief.cap"), sample("evidence.mass")});
  EXPECT_EQ(c.code, 0);
  EXPECT_NO_THROW(std::get<Capacity>(parse_document(c.out)));
  EXPECT_EQ(run({"combine", "--rule", "nope", "--level", "mass", sample("belief.cap"), sample("belief.cap")}).code, 1);

  EXPECT_EQ(run({"envelope", "--value", "{a,b}", sample("pairs.cap")}).out, "envelope: 1/2\n");
  EXPECT_EQ(run({"envelope", "--conditional", "{a}", "{a,b}", sample("belief.cap")}).out,
            "conditional-envelope: 1/2\n");
  const Outcome rev = run({"envelope", "--revise", sample("evidence.mass"), sample("belief.cap")});
  EXPECT_EQ(rev.code, 0);
  EXPECT_NE(rev.out.find("epsilon: 1/1048576"), std::string::npos);
  EXPECT_NE(rev.out.find("{a}: lower=1/2 best=1/2 collapsed=true"), std::string::npos);
}

TEST(Cli, InfoAndMaxentUseApproximateLines) {
  TempFile q("kind: probability\nframe: a b\n{a} 5/8\n{b} 3/8\n");
  const Outcome info = run({"info", "--relent", q.path(), sample("prior.prob")});
  EXPECT_EQ(info.code, 0);
  EXPECT_EQ(info.out, "relative-information: ~0.312751514711\n");

  const Outcome maxent = run({"maxent", "--prior", sample("prior.prob"), "--bound", sample("bound.mass")});
  EXPECT_EQ(maxent.code, 0);
  EXPECT_NE(maxent.out.find("weight {a}: ~0.5\n"), std::string::npos);
  EXPECT_NE(maxent.out.find("relative-information: ~0.143841036226"), std::string::npos);
  EXPECT_NE(maxent.out.find("converged: true"), std::string::npos);
}

TEST(Cli, MaxentIterationCapExitsThree) {
  const Outcome r = run({"--max-iter", "0", "maxent", "--prior", sample("uniform3.prob"), "--bound", sample("belief.cap")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("converged: false"), std::string::npos);
}

TEST(Cli, LabReportsWitness) {
  const Outcome r = run({"lab", "it-self-conditional"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("found: true"), std::string::npos);
  EXPECT_NE(r.out.find("regression-reproduced: true"), std::string::npos);
  EXPECT_EQ(run({"lab", "unknown-claim"}).code, 1);
}

TEST(Cli, JointEmitAndVerify) {
  const Outcome j = run({"joint", sample("sensor.model"), sample("uniform3.prob")});
  ASSERT_EQ(j.code, 0);
  TempFile q(j.out);
  const Outcome v = run({"joint", "--verify", q.path(), sample("sensor.model"), sample("uniform3.prob")});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("conserving: true"), std::string::npos);
}

TEST(Cli, UsageAndParseErrorsExitOne) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"check", sample("pairs.cap")}).code, 1);
  EXPECT_EQ(run({"check", "--property", "monotone", "/no/such/file"}).code, 1);
  TempFile bad("kind: mass\nframe: a b\n{a} 1/2\n{b} 2/5\n");
  const Outcome r = run({"transform", "--zeta", bad.path()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("masses sum to 9/10, expected 1"), std::string::npos);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, NonstandardCapacityNeedsTheFlag) {
  TempFile f("kind: capacity\nframe: a b\n{a} 3/2\n{a,b} 1\n");
  EXPECT_EQ(run({"check", "--property", "monotone", f.path()}).code, 1);
  EXPECT_EQ(run({"--allow-nonstandard", "check", "--property", "monotone", f.path()}).code, 2);
}

}  // namespace
}  // namespace gpk
