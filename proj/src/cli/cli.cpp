#include "crysl/cli/cli.hpp"

#include <algorithm>
#include <CLI11.hpp>

#include "crysl/analysis/analyze.hpp"
#include "crysl/compile/compiled_rule.hpp"
#include "crysl/minij/parser.hpp"
#include "crysl/report/report.hpp"
#include "crysl/semantics/evaluate.hpp"
#include "crysl/semantics/trace.hpp"

namespace crysl::cli {

namespace {

enum class Format { Human, Json };

void printErrors(std::ostream& err, const std::vector<Error>& errors) {
  for (const auto& e : errors) err << e.render() << "\n";
}

// Parses, validates and compiles a ruleset; prints diagnostics and returns
// nothing on failure.
std::optional<compile::CompiledRuleSet> loadRules(const std::string& dir, std::ostream& err) {
  try {
    return compile::compileRuleset(frontend::parseRuleset(dir));
  } catch (const ErrorList& list) {
    printErrors(err, list.errors());
  } catch (const Error& e) {
    printErrors(err, {e});
  }
  return std::nullopt;
}

int checkRules(const std::string& dir, const std::string& dotType, std::ostream& out,
               std::ostream& err) {
  auto rules = loadRules(dir, err);
  if (!rules) return 1;
  if (!dotType.empty()) {
    const auto* rule = rules->find(dotType);
    if (!rule) {
      err << "error: no rule for " << dotType << "\n";
      return 1;
    }
    out << compile::toDot(*rule);
    return 0;
  }
  if (rules->rules.empty()) err << "warning: no rule files in " << dir << "\n";
  for (const auto& r : rules->rules) {
    out << r.file << ": " << r.specType << " (" << r.nfa.stateCount() << " states, "
        << r.eventTable.size() << " events)\n";
  }
  std::size_t n = rules->rules.size();
  out << n << (n == 1 ? " rule OK" : " rules OK") << "\n";
  return 0;
}

int evalTrace(const std::string& dir, const std::string& file, Format format,
              std::ostream& out, std::ostream& err) {
  auto rules = loadRules(dir, err);
  if (!rules) return 2;
  semantics::RuntimeTrace trace;
  semantics::TraceVerdict verdict;
  try {
    trace = semantics::readTraceFile(file);
    verdict = semantics::evaluateTrace(trace, *rules);
  } catch (const Error& e) {
    printErrors(err, {e});
    return 2;
  }
  out << (format == Format::Json ? report::renderJson(verdict, trace)
                                 : report::renderHuman(verdict, trace));
  return verdict.ok() ? 0 : 1;
}

int analyze(const std::string& dir, const std::string& file, Format format,
            const analysis::AnalysisConfig& config, bool withTimings, std::ostream& out,
            std::ostream& err) {
  auto rules = loadRules(dir, err);
  if (!rules) return 2;
  analysis::AnalysisReport result;
  try {
    minij::Program program = minij::readProgramFile(file);
    result = analysis::analyzeProgram(program, *rules, config);
  } catch (const Error& e) {
    printErrors(err, {e});
    return 2;
  }
  out << (format == Format::Json ? report::renderJson(result, withTimings)
                                 : report::renderHuman(result, withTimings));
  return result.findings.empty() ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CrySL ruleset checker, trace evaluator and static misuse analyzer", "crysl"};
  app.require_subcommand(1);

  std::string rulesetDir;
  std::string input;
  std::string dotType;
  Format format = Format::Human;
  long long budgetMs = 10000;
  std::vector<std::string> excludes;
  bool withTimings = false;
  const std::map<std::string, Format> formats{{"human", Format::Human}, {"json", Format::Json}};

  auto* check = app.add_subcommand("check-rules", "Parse, validate and compile a ruleset");
  check->add_option("--ruleset", rulesetDir, "Directory of .crysl files")->required();
  check->add_option("--dot", dotType, "Print the automaton of this SPEC type as Graphviz");

  auto* eval = app.add_subcommand("eval-trace", "Evaluate a runtime trace against a ruleset");
  eval->add_option("--ruleset", rulesetDir, "Directory of .crysl files")->required();
  eval->add_option("--format", format, "human or json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  eval->add_option("trace", input, "Trace file")->required();

  auto* an = app.add_subcommand("analyze", "Statically analyze a MiniJ program");
  an->add_option("--ruleset", rulesetDir, "Directory of .crysl files")->required();
  an->add_option("--format", format, "human or json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  an->add_option("--budget-ms", budgetMs, "Analysis budget per allocation site")
      ->check(CLI::PositiveNumber);
  an->add_option("--exclude", excludes, "Skip functions whose name starts with this prefix");
  an->add_flag("--with-timings", withTimings, "Include per-phase timings");
  an->add_option("program", input, "MiniJ source file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  if (check->parsed()) return checkRules(rulesetDir, dotType, out, err);
  if (eval->parsed()) return evalTrace(rulesetDir, input, format, out, err);
  analysis::AnalysisConfig config;
  config.budget = std::chrono::milliseconds(budgetMs);
  config.excludePrefixes = excludes;
  return analyze(rulesetDir, input, format, config, withTimings, out, err);
}

}  // namespace crysl::cli
