#include <gtest/gtest.h>

#include "crysl/analysis/analyze.hpp"
#include "crysl/minij/parser.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

namespace crysl::testing {
namespace {

std::string list(const std::set<Violation>& s) {
  std::string out;
  for (const auto& v : s) out += " " + toString(v);
  return out;
}

class Concordance : public ::testing::TestWithParam<std::filesystem::path> {};

TEST_P(Concordance, StaticCoversDynamicAndMatchesExpectation) {
  auto r = checkConcordance(GetParam(), fixtureRules());
  EXPECT_TRUE(r.missed.empty()) << "missed:" << list(r.missed);
  EXPECT_TRUE(r.unexplained.empty()) << "static only, not annotated:" << list(r.unexplained);
  EXPECT_TRUE(r.unexpected.empty()) << "not in .expect:" << list(r.unexpected);
  EXPECT_TRUE(r.absent.empty()) << "expected, not reported:" << list(r.absent);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, Concordance, ::testing::ValuesIn(concordancePrograms()),
                         [](const auto& info) {
                           std::string n = info.param.stem().string();
                           for (auto& c : n) {
                             if (!isalnum(static_cast<unsigned char>(c))) c = '_';
                           }
                           return "p" + n;
                         });

// Random loop-free programs over the fixture API: no path may exhibit a
// violation the analyzer does not report.
TEST(ConcordanceProperty, RandomProgramsHaveNoFalseNegatives) {
  Rng rng(4242);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    std::string text = randomProgramText(rng);
    minij::Program program;
    try {
      program = minij::parseProgram(text, "random.mj");
    } catch (const Error&) {
      continue;
    }
    auto statik = staticViolations(analysis::analyzeProgram(program, fixtureRules()).findings);
    std::set<Violation> dynamic;
    for (const auto& run : enumeratePaths(program, fixtureRules())) {
      auto found = dynamicViolations(run, fixtureRules());
      dynamic.insert(found.begin(), found.end());
    }
    std::set<Violation> missed;
    for (const auto& v : dynamic) {
      if (!statik.count(v)) missed.insert(v);
    }
    ++checked;
    ASSERT_TRUE(missed.empty()) << "missed" << list(missed) << " in\n" << text;
  }
  EXPECT_GT(checked, 1800);
}

}  // namespace
}  // namespace crysl::testing
