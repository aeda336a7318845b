#include "crysl/report/report.hpp"

#include <sstream>

namespace crysl::report {

using analysis::AnalysisReport;
using analysis::Category;
using analysis::Finding;
using nlohmann::json;
using semantics::RuntimeValue;

namespace {

constexpr Category kCategories[] = {Category::ConstraintViolation, Category::OrderError,
                                    Category::ForbiddenMethod, Category::UnsatisfiedPredicate};

const char* noun(Category c, bool plural) {
  switch (c) {
    case Category::ConstraintViolation:
      return plural ? "constraint violations" : "constraint violation";
    case Category::OrderError:
      return plural ? "order errors" : "order error";
    case Category::ForbiddenMethod:
      return plural ? "forbidden method calls" : "forbidden method call";
    case Category::UnsatisfiedPredicate:
      return plural ? "unsatisfied predicates" : "unsatisfied predicate";
  }
  return "";
}

json position(const SourcePos& pos) { return {{"line", pos.line}, {"column", pos.column}}; }

double millis(std::chrono::microseconds us) { return static_cast<double>(us.count()) / 1000.0; }

std::string location(const std::string& file, const SourcePos& pos) {
  return file + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

json valueJson(const RuntimeValue& v) {
  switch (v.kind()) {
    case RuntimeValue::Kind::String:
      return {{"string", v.text()}};
    case RuntimeValue::Kind::Int:
      return {{"int", v.integer()}};
    case RuntimeValue::Kind::Object:
      return {{"object", v.objectId()}, {"type", v.type()}};
    case RuntimeValue::Kind::Unknown:
      break;
  }
  return {{"unknown", true}};
}

std::string argsSpelling(const semantics::PredicateArgs& args) {
  std::string out = "[";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i] ? args[i]->spelling() : "_";
  }
  return out + "]";
}

std::string eventRef(const semantics::RuntimeTrace& trace, std::size_t i) {
  std::string out = "event " + std::to_string(i);
  if (i < trace.events.size() && trace.events[i].line > 0) {
    out += " (line " + std::to_string(trace.events[i].line) + ")";
  }
  return out;
}

}  // namespace

json toJson(const AnalysisReport& report, bool withTimings) {
  json findings = json::array();
  for (const Finding& f : report.findings) {
    json j = {{"category", analysis::toString(f.category)},
              {"file", f.file},
              {"position", position(f.pos)},
              {"rule", f.ruleType},
              {"message", f.message},
              {"details", f.details}};
    j["site"] = f.site ? position(f.sitePos) : json(nullptr);
    findings.push_back(std::move(j));
  }
  json summary = json::object();
  for (Category c : kCategories) summary[analysis::toString(c)] = report.count(c);
  summary["total"] = report.findings.size();

  json skipped = json::array();
  for (const auto& s : report.skipped) {
    skipped.push_back({{"position", position(s.pos)}, {"type", s.type}, {"reason", s.reason}});
  }

  json out = {{"schemaVersion", kSchemaVersion},
              {"program", {{"file", report.programFile},
                           {"fingerprint", report.programFingerprint}}},
              {"ruleset", {{"fingerprint", report.rulesetFingerprint}}},
              {"findings", std::move(findings)},
              {"summary", std::move(summary)},
              {"skippedSites", std::move(skipped)}};
  if (withTimings) {
    const auto& t = report.timings;
    out["timingsMs"] = {{"callGraph", millis(t.callGraph)},
                        {"typestate", millis(t.typestate)},
                        {"constraints", millis(t.constraints)},
                        {"predicates", millis(t.predicates)},
                        {"total", millis(t.total())}};
  }
  return out;
}

std::string renderJson(const AnalysisReport& report, bool withTimings) {
  return toJson(report, withTimings).dump(2) + "\n";
}

std::string summaryLine(const AnalysisReport& report) {
  std::string out;
  for (Category c : kCategories) {
    std::size_t n = report.count(c);
    if (n == 0) continue;
    if (!out.empty()) out += ", ";
    out += std::to_string(n) + " " + noun(c, n != 1);
  }
  return out.empty() ? "no findings" : out;
}

std::string renderHuman(const AnalysisReport& report, bool withTimings) {
  std::ostringstream out;
  for (Category c : kCategories) {
    std::size_t n = report.count(c);
    if (n == 0) continue;
    out << analysis::toString(c) << " (" << n << ")\n";
    for (const Finding& f : report.findings) {
      if (f.category != c) continue;
      out << "  " << location(f.file, f.pos) << ": " << f.ruleType << ": " << f.message;
      if (f.site && f.sitePos != f.pos) {
        out << " (object allocated at line " << f.sitePos.line << ")";
      }
      out << "\n";
    }
  }
  for (const auto& s : report.skipped) {
    out << "warning: " << location(report.programFile, s.pos) << ": " << s.type
        << " site skipped: " << s.reason << "\n";
  }
  if (withTimings) {
    const auto& t = report.timings;
    out << "timings (ms): call graph " << millis(t.callGraph) << ", typestate "
        << millis(t.typestate) << ", constraints " << millis(t.constraints)
        << ", predicates " << millis(t.predicates) << ", total " << millis(t.total()) << "\n";
  }
  out << summaryLine(report) << "\n";
  return out.str();
}

json toJson(const semantics::TraceVerdict& verdict, const semantics::RuntimeTrace& trace) {
  auto optIndex = [](const std::optional<std::size_t>& i) {
    return i ? json(*i) : json(nullptr);
  };
  json objects = json::array();
  for (const auto& o : verdict.objects) {
    json j = {{"base", valueJson(o.base)},
              {"type", o.specType},
              {"events", o.indices},
              {"forbiddenOk", o.forbiddenOk},
              {"orderOk", o.orderOk},
              {"constraintsOk", o.constraintsOk},
              {"sat", o.sat()},
              {"forbiddenAt", optIndex(o.forbiddenAt)},
              {"orderRejectedAt", optIndex(o.orderRejectedAt)},
              {"constraintFailedAt", optIndex(o.constraintFailedAt)}};
    if (!o.forbiddenSignature.empty()) j["forbiddenSignature"] = o.forbiddenSignature;
    if (!o.failedConstraint.empty()) j["failedConstraint"] = o.failedConstraint;
    objects.push_back(std::move(j));
  }
  json pool = json::array();
  for (const auto& p : verdict.pool) {
    json args = json::array();
    for (const auto& a : p.args) args.push_back(a ? valueJson(*a) : json(nullptr));
    pool.push_back({{"name", p.name},
                    {"args", std::move(args)},
                    {"ensuredAt", p.ensuredAt},
                    {"killedAt", optIndex(p.killedAt)},
                    {"by", valueJson(p.base)},
                    {"type", p.specType}});
  }
  json unsatisfied = json::array();
  for (const auto& u : verdict.unsatisfied) {
    unsatisfied.push_back({{"base", valueJson(u.base)},
                           {"type", u.specType},
                           {"predicate", u.spelling},
                           {"at", u.at}});
  }
  return {{"schemaVersion", kSchemaVersion},
          {"ok", verdict.ok()},
          {"eventCount", trace.events.size()},
          {"objects", std::move(objects)},
          {"pool", std::move(pool)},
          {"unsatisfied", std::move(unsatisfied)}};
}

std::string renderJson(const semantics::TraceVerdict& verdict,
                       const semantics::RuntimeTrace& trace) {
  return toJson(verdict, trace).dump(2) + "\n";
}

std::string renderHuman(const semantics::TraceVerdict& verdict,
                        const semantics::RuntimeTrace& trace) {
  std::ostringstream out;
  auto flag = [](bool ok) { return ok ? "ok" : "FAILED"; };
  for (const auto& o : verdict.objects) {
    out << (o.base.isObject() ? "@" + o.base.objectId() : o.base.spelling()) << " "
        << o.specType << ": " << (o.sat() ? "sat" : "not sat")
        << " (forbidden " << flag(o.forbiddenOk) << ", order " << flag(o.orderOk)
        << ", constraints " << flag(o.constraintsOk) << ")\n";
    if (o.forbiddenAt) {
      out << "  forbidden " << o.forbiddenSignature << " at " << eventRef(trace, *o.forbiddenAt)
          << "\n";
    }
    if (!o.orderOk) {
      if (o.orderRejectedAt) {
        out << "  order rejects " << eventRef(trace, *o.orderRejectedAt) << "\n";
      } else {
        out << "  trace ends outside an accepting state\n";
      }
    }
    if (o.constraintFailedAt) {
      out << "  " << o.failedConstraint << " fails at " << eventRef(trace, *o.constraintFailedAt)
          << "\n";
    }
  }
  out << "predicates:";
  if (verdict.pool.empty()) out << " none";
  out << "\n";
  for (const auto& p : verdict.pool) {
    out << "  " << p.name << argsSpelling(p.args) << " ensured by " << p.base.spelling()
        << " at " << eventRef(trace, p.ensuredAt);
    if (p.killedAt) out << ", negated at " << eventRef(trace, *p.killedAt);
    out << "\n";
  }
  for (const auto& u : verdict.unsatisfied) {
    out << "unsatisfied: " << u.base.spelling() << " " << u.specType << " requires "
        << u.spelling << " at " << eventRef(trace, u.at) << "\n";
  }
  out << (verdict.ok() ? "trace ok" : "trace violates the ruleset") << "\n";
  return out.str();
}

}  // namespace crysl::report
