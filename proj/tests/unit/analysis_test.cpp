#include <gtest/gtest.h>

#include "crysl/analysis/analyze.hpp"
#include "crysl/frontend/validate.hpp"
#include "crysl/minij/parser.hpp"
#include "crysl/report/report.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "interpreter.hpp"

namespace crysl::analysis {
namespace {

using testing::fixturePath;
using testing::fixtureRules;
using testing::readText;

AnalysisReport analyzeText(const std::string& text,
                           const compile::CompiledRuleSet& rules = fixtureRules(),
                           const AnalysisConfig& config = {}) {
  auto program = minij::parseProgram(text, "t.mj");
  return analyzeProgram(program, rules, config);
}

AnalysisReport analyzeFixture(const std::string& name) {
  auto program = minij::readProgramFile(fixturePath("programs/" + name));
  return analyzeProgram(program, fixtureRules());
}

// The fixture rules, with extra in-memory rules and text edits.
compile::CompiledRuleSet customRules(
    const std::vector<frontend::RuleSource>& extra,
    const std::function<void(std::string& name, std::string& text)>& edit = {}) {
  std::vector<frontend::RuleSource> sources = extra;
  for (auto name : {"KeyGenerator.crysl", "Cipher.crysl", "MessageDigest.crysl",
                    "PBEKeySpec.crysl"}) {
    std::string n = name;
    std::string text = readText(fixturePath(std::string("rules/") + name));
    if (edit) edit(n, text);
    sources.push_back({n, text});
  }
  return compile::compileRuleset(
      frontend::parseRuleset(sources, readText(fixturePath("rules/types.manifest"))));
}

std::vector<std::pair<Category, int>> summary(const AnalysisReport& r) {
  std::vector<std::pair<Category, int>> out;
  for (const auto& f : r.findings) out.push_back({f.category, f.pos.line});
  return out;
}

TEST(Analyze, EmptyProgramHasNoFindings) {
  auto r = analyzeText("void main() {}");
  EXPECT_TRUE(r.findings.empty());
  EXPECT_TRUE(r.skipped.empty());
}

TEST(Analyze, DigestExample) {
  auto r = analyzeFixture("message_digest.mj");
  ASSERT_EQ(r.findings.size(), 2u);
  const auto& cv = r.findings[0];
  EXPECT_EQ(cv.category, Category::ConstraintViolation);
  EXPECT_EQ(cv.pos.line, 12);
  EXPECT_NE(cv.message.find("\"MD5\""), std::string::npos);
  EXPECT_EQ(cv.details.at("variable"), "algorithm");
  const auto& oe = r.findings[1];
  EXPECT_EQ(oe.category, Category::OrderError);
  EXPECT_EQ(oe.pos.line, 18);
  EXPECT_EQ(oe.sitePos.line, 12);
}

TEST(Analyze, ConstraintOnUnboundVariableIsIrrelevant) {
  auto rules = customRules({}, [](std::string& name, std::string& text) {
    if (name != "MessageDigest.crysl") return;
    auto at = text.find("ENSURES");
    text.insert(at, "  offset in {0};\n\n");
  });
  ASSERT_EQ(rules.find("java.security.MessageDigest")->constraints.size(), 2u);
  auto program = minij::readProgramFile(fixturePath("programs/message_digest.mj"));
  EXPECT_EQ(summary(analyzeProgram(program, rules)), summary(analyzeFixture("message_digest.mj")));
}

TEST(Analyze, UndeterminedValueViolatesMembership) {
  auto r = analyzeText(R"(import java.security.MessageDigest;
void main() {
  String alg = Util.choose();
  MessageDigest md = MessageDigest.getInstance(alg);
  byte[] in = Util.bytes();
  md.update(in);
  byte[] out = md.digest();
})");
  ASSERT_EQ(r.findings.size(), 1u);
  EXPECT_EQ(r.findings[0].category, Category::ConstraintViolation);
  EXPECT_EQ(r.findings[0].details.count("undetermined"), 1u);
}

TEST(Analyze, KeyThenCipherIsClean) { EXPECT_TRUE(analyzeFixture("keygen_cipher.mj").findings.empty()); }

TEST(Analyze, SmallKeyPropagatesToCipher) {
  auto r = analyzeFixture("keygen_cipher_64.mj");
  ASSERT_EQ(r.findings.size(), 2u);
  EXPECT_EQ(r.count(Category::ConstraintViolation), 1u);
  EXPECT_EQ(r.count(Category::UnsatisfiedPredicate), 1u);
  for (const auto& f : r.findings) {
    if (f.category == Category::ConstraintViolation) {
      EXPECT_EQ(f.ruleType, "javax.crypto.KeyGenerator");
      EXPECT_EQ(f.pos.line, 11);
    } else {
      EXPECT_EQ(f.ruleType, "javax.crypto.Cipher");
      EXPECT_EQ(f.details.at("predicate"), "generatedKey[key, alg(transformation)]");
    }
  }
}

TEST(Analyze, RequirementNoRuleEnsuresIsReportedOnce) {
  auto rules = customRules({{"Needs.crysl", R"(SPEC x.Needs
OBJECTS
  int n;
EVENTS
  c: Needs(n);
  u: use();
ORDER
  c, u*
CONSTRAINTS
REQUIRES
  never[this];
ENSURES
  done[this];
)"}});
  auto r = analyzeText(R"(import x.Needs;
void main() {
  Needs a = new Needs(1);
  a.use();
  a.use();
})",
                       rules);
  ASSERT_EQ(r.findings.size(), 1u);
  EXPECT_EQ(r.findings[0].category, Category::UnsatisfiedPredicate);
  EXPECT_EQ(r.findings[0].details.at("predicate"), "never[this]");
}

TEST(Analyze, IncompleteOperationAtLastUse) {
  auto r = analyzeText(R"(import javax.crypto.KeyGenerator;
void main() {
  KeyGenerator kg = KeyGenerator.getInstance("AES");
  int x = 1;
})");
  ASSERT_EQ(r.findings.size(), 1u);
  EXPECT_EQ(r.findings[0].category, Category::OrderError);
  EXPECT_EQ(r.findings[0].details.at("kind"), "incomplete");
}

TEST(Analyze, UnreachableMisuseIsIgnored) {
  auto r = analyzeText(R"(import javax.crypto.spec.PBEKeySpec;
import java.security.MessageDigest;
void never() {
  char[] pw = Util.pw();
  PBEKeySpec s = new PBEKeySpec(pw);
  MessageDigest md = MessageDigest.getInstance("MD5");
}
void main() {})");
  EXPECT_TRUE(r.findings.empty());
}

TEST(Analyze, ExcludedFunctionsAreIgnored) {
  std::string text = R"(import java.security.MessageDigest;
void lib_digest() {
  MessageDigest md = MessageDigest.getInstance("MD5");
}
void main() { lib_digest(); })";
  EXPECT_FALSE(analyzeText(text).findings.empty());
  AnalysisConfig config;
  config.excludePrefixes = {"lib_"};
  EXPECT_TRUE(analyzeText(text, fixtureRules(), config).findings.empty());
  EXPECT_TRUE(isExcluded("lib_x", config));
  EXPECT_FALSE(isExcluded("main", config));
}

TEST(Forbidden, PasswordOnlyConstructorSuggestsReplacement) {
  auto r = analyzeFixture("pbe_keyspec.mj");
  ASSERT_EQ(r.count(Category::ForbiddenMethod), 1u);
  for (const auto& f : r.findings) {
    if (f.category != Category::ForbiddenMethod) continue;
    EXPECT_EQ(f.details.at("replacement"), "c1");
    EXPECT_EQ(f.details.at("signature"), "PBEKeySpec(char[])");
    EXPECT_EQ(f.pos.line, 5);
  }
}

TEST(Forbidden, OneFindingPerCallSite) {
  auto program = minij::parseProgram(R"(import javax.crypto.spec.PBEKeySpec;
void main() {
  char[] pw = Util.pw();
  byte[] salt = Util.salt();
  PBEKeySpec a = new PBEKeySpec(pw, salt, 1000);
  PBEKeySpec b = new PBEKeySpec(pw, salt, 2000);
  PBEKeySpec c = new PBEKeySpec(pw, salt, 1000, 256);
})");
  auto ir = minij::buildCfg(program);
  auto cg = minij::buildCallGraph(ir);
  auto found = scanForbidden(ir, cg, fixtureRules());
  ASSERT_EQ(found.size(), 2u);
  EXPECT_EQ(found[0].pos.line, 5);
  EXPECT_EQ(found[1].pos.line, 6);
}

struct Pipeline {
  minij::Program program;
  minij::ProgramIr ir;
  minij::Liveness live;
  minij::CallGraph cg;
  std::vector<minij::AllocationSite> sites;

  explicit Pipeline(const std::string& text)
      : program(minij::parseProgram(text)),
        ir(minij::buildCfg(program)),
        live(minij::computeLiveness(ir)),
        cg(minij::buildCallGraph(ir)),
        sites(minij::findAllocationSites(ir, cg, fixtureRules())) {}

  std::vector<SiteAnalysis> analyzeSites() {
    ValueExtractor values(ir, cg);
    std::vector<SiteAnalysis> out;
    auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(10);
    for (const auto& s : sites) {
      SiteAnalysis a;
      a.typestate = runTypestate(ir, live, cg, s, fixtureRules().types, deadline);
      a.constraintFindings = solveConstraints(a.typestate, ir, values);
      a.bindings = siteBindings(a.typestate, ir, values);
      out.push_back(std::move(a));
    }
    return out;
  }

  minij::NodeId nodeAtLine(int line) const {
    for (std::size_t n = 0; n < ir.nodes.size(); ++n) {
      if (ir.nodes[n].pos.line == line && ir.nodes[n].kind != minij::Node::Kind::Branch) {
        return static_cast<minij::NodeId>(n);
      }
    }
    return -1;
  }
};

TEST(Typestate, KeyGeneratorEndsInAcceptingState) {
  Pipeline p(readText(fixturePath("programs/keygen_cipher.mj")));
  auto sites = p.analyzeSites();
  const auto& kg = sites.at(0).typestate;
  ASSERT_EQ(kg.site.type, "javax.crypto.KeyGenerator");
  EXPECT_TRUE(kg.orderErrors.empty());
  auto after = p.nodeAtLine(13);
  EXPECT_EQ(kg.statesIn.at(after), std::set<compile::StateSet>{kg.site.rule->nfa.accepting()});
}

TEST(Values, DigestAlgorithmHasBothBranches) {
  Pipeline p(readText(fixturePath("programs/message_digest.mj")));
  ValueExtractor values(p.ir, p.cg);
  auto vs = values.varBefore(p.nodeAtLine(12), "alg");
  EXPECT_TRUE(vs.complete);
  std::set<RuntimeValue> expected{RuntimeValue::ofString("SHA-256"), RuntimeValue::ofString("MD5")};
  EXPECT_EQ(vs.values, expected);
}

TEST(Values, StraightLineSingleton) {
  Pipeline p("void main() {\n  int a = 7;\n  int b = a;\n  String s = Util.f(b);\n}");
  ValueExtractor values(p.ir, p.cg);
  auto vs = values.varBefore(p.nodeAtLine(4), "b");
  EXPECT_TRUE(vs.complete);
  EXPECT_EQ(vs.values, std::set<RuntimeValue>{RuntimeValue::ofInt(7)});
}

TEST(Values, ThreeBranchesMatchPathEnumeration) {
  std::string text = R"(import java.security.MessageDigest;
String pick(boolean c, String a, String b) {
  String r = a;
  if (c) {
    r = b;
  }
  return r;
}
void main() {
  boolean c1 = Util.f();
  boolean c2 = Util.f();
  boolean c3 = Util.f();
  String alg = "SHA-256";
  if (c1) {
    alg = "MD5";
  }
  if (c2) {
    alg = pick(c3, alg, "SHA-512");
  } else {
    if (c3) {
      alg = Util.name();
    }
  }
  MessageDigest md = MessageDigest.getInstance(alg);
})";
  Pipeline p(text);
  ValueExtractor values(p.ir, p.cg);
  auto vs = values.varBefore(p.nodeAtLine(24), "alg");
  std::set<RuntimeValue> dynamic;
  bool opaque = false;
  for (const auto& run : testing::enumeratePaths(p.program, fixtureRules())) {
    for (const auto& e : run.trace.events) {
      const auto& v = e.env.at("algorithm");
      if (v == RuntimeValue::ofString("<opaque>")) {
        opaque = true;
      } else {
        dynamic.insert(v);
      }
    }
  }
  EXPECT_TRUE(opaque);
  EXPECT_FALSE(vs.complete);
  EXPECT_EQ(vs.known(), dynamic);
  EXPECT_EQ(dynamic.size(), 3u);
}

TEST(Predicates, FixedPointIsBoundedBySiteCount) {
  testing::Rng rng(6060);
  for (int n = 0; n < 300; ++n) {
    std::string text = testing::randomProgramText(rng);
    std::optional<Pipeline> p;
    try {
      p.emplace(text);
    } catch (const Error&) {
      continue;
    }
    auto sites = p->analyzeSites();
    auto res = resolvePredicates(sites, p->ir);
    // The last pass only confirms that nothing changed.
    EXPECT_LE(static_cast<std::size_t>(res.iterations), sites.size() + 1) << text;
    EXPECT_LE(res.ensuringSites.size(), sites.size());
  }
}

TEST(Predicates, GeneratedKeyEnsuredAfterGenerateKey) {
  Pipeline p(readText(fixturePath("programs/keygen_cipher.mj")));
  auto sites = p.analyzeSites();
  auto res = resolvePredicates(sites, p.ir);
  EXPECT_EQ(res.ensuringSites.size(), 2u);
  EXPECT_TRUE(res.findings.empty());
  auto holds = [&](int line, const std::string& name) {
    auto it = res.ensuredAt.find(p.nodeAtLine(line));
    if (it == res.ensuredAt.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](const StaticPredicate& sp) { return sp.name == name; });
  };
  EXPECT_FALSE(holds(11, "generatedKey"));
  EXPECT_FALSE(holds(12, "generatedKey"));
  EXPECT_TRUE(holds(13, "generatedKey"));
  EXPECT_TRUE(holds(15, "generatedKey"));
}

TEST(Report, TimingsAreNonNegativeAndSumToTotal) {
  auto r = analyzeFixture("keygen_cipher_64.mj");
  const auto& t = r.timings;
  for (auto d : {t.callGraph, t.typestate, t.constraints, t.predicates}) EXPECT_GE(d.count(), 0);
  auto j = report::toJson(r, true);
  double sum = 0;
  for (auto key : {"callGraph", "typestate", "constraints", "predicates"}) {
    sum += j["timingsMs"][key].get<double>();
  }
  EXPECT_NEAR(sum, j["timingsMs"]["total"].get<double>(), 1.0);
  EXPECT_FALSE(report::toJson(r).contains("timingsMs"));
}

TEST(Report, FindingsSortedAndDeterministic) {
  testing::Rng rng(515);
  for (int n = 0; n < 100; ++n) {
    std::string text = testing::randomProgramText(rng);
    minij::Program program;
    try {
      program = minij::parseProgram(text, "r.mj");
    } catch (const Error&) {
      continue;
    }
    auto a = analyzeProgram(program, fixtureRules());
    auto b = analyzeProgram(program, fixtureRules());
    EXPECT_TRUE(std::is_sorted(a.findings.begin(), a.findings.end()));
    EXPECT_EQ(report::renderJson(a), report::renderJson(b));
    EXPECT_EQ(report::renderHuman(a), report::renderHuman(b));
  }
}

}  // namespace
}  // namespace crysl::analysis
