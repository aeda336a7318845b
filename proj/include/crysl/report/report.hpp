#pragma once

#include <string>

#include <json.hpp>

#include "crysl/analysis/analyze.hpp"
#include "crysl/semantics/evaluate.hpp"

namespace crysl::report {

inline constexpr int kSchemaVersion = 1;

// Analysis report as JSON (schema in docs/report-schema.md). Timings are
// wall-clock and therefore left out unless asked for, so that the document
// is byte-stable for identical inputs.
nlohmann::json toJson(const analysis::AnalysisReport& report, bool withTimings = false);
std::string renderJson(const analysis::AnalysisReport& report, bool withTimings = false);

// "1 constraint violation, 1 order error"; "no findings" when empty.
std::string summaryLine(const analysis::AnalysisReport& report);

// Findings grouped by category, then the summary line.
std::string renderHuman(const analysis::AnalysisReport& report, bool withTimings = false);

nlohmann::json toJson(const semantics::TraceVerdict& verdict,
                      const semantics::RuntimeTrace& trace);
std::string renderJson(const semantics::TraceVerdict& verdict,
                       const semantics::RuntimeTrace& trace);
std::string renderHuman(const semantics::TraceVerdict& verdict,
                        const semantics::RuntimeTrace& trace);

}  // namespace crysl::report
