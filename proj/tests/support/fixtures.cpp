#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "crysl/analysis/analyze.hpp"
#include "crysl/minij/parser.hpp"

namespace crysl::testing {

namespace fs = std::filesystem;

fs::path fixturePath(const std::string& relative) {
  return fs::path(CRYSL_FIXTURES_DIR) / relative;
}

std::string readText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const compile::CompiledRuleSet& fixtureRules() {
  static const compile::CompiledRuleSet rules =
      compile::compileRuleset(frontend::parseRuleset(fixturePath("rules")));
  return rules;
}

Expectation readExpectation(const fs::path& path) {
  static const std::map<std::string, analysis::Category> categories{
      {"ConstraintViolation", analysis::Category::ConstraintViolation},
      {"OrderError", analysis::Category::OrderError},
      {"ForbiddenMethod", analysis::Category::ForbiddenMethod},
      {"UnsatisfiedPredicate", analysis::Category::UnsatisfiedPredicate}};
  Expectation out;
  std::istringstream in(readText(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream words(line);
    std::string category;
    int at = 0;
    std::string rest;
    words >> category >> at;
    std::getline(words, rest);
    if (!categories.count(category) || at <= 0) {
      throw std::runtime_error(path.string() + ": bad line '" + line + "'");
    }
    Violation v{categories.at(category), at};
    out.findings.insert(v);
    if (rest.find("artifact:") != std::string::npos) out.artifacts.insert(v);
  }
  return out;
}

ConcordanceResult checkConcordance(const fs::path& path, const compile::CompiledRuleSet& rules) {
  minij::Program program = minij::readProgramFile(path);
  ConcordanceResult r;
  r.statik = staticViolations(analysis::analyzeProgram(program, rules).findings);
  auto runs = enumeratePaths(program, rules);
  r.paths = runs.size();
  for (const auto& run : runs) {
    auto found = dynamicViolations(run, rules);
    r.dynamic.insert(found.begin(), found.end());
  }
  fs::path expectPath = path;
  expectPath.replace_extension(".expect");
  Expectation expect = readExpectation(expectPath);
  for (const auto& v : r.dynamic) {
    if (!r.statik.count(v)) r.missed.insert(v);
  }
  for (const auto& v : r.statik) {
    if (!r.dynamic.count(v) && !expect.artifacts.count(v)) r.unexplained.insert(v);
    if (!expect.findings.count(v)) r.unexpected.insert(v);
  }
  for (const auto& v : expect.findings) {
    if (!r.statik.count(v)) r.absent.insert(v);
  }
  return r;
}

std::vector<fs::path> concordancePrograms() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(fixturePath("concordance"))) {
    if (e.path().extension() == ".mj") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace crysl::testing
