#pragma once

#include <string>

#include "crysl/frontend/ast.hpp"

namespace crysl::frontend {

// Parses one rule file. Sections must appear in the order
//   SPEC OBJECTS EVENTS [FORBIDDEN] ORDER CONSTRAINTS [REQUIRES] ENSURES
//   [NEGATES]
// Errors: Syntax (with expected-token set), DuplicateSection,
// MissingMandatorySection. Error positions are relative to src.text and
// carry src.path as the file.
RuleAst parseRule(const RuleSource& src);

// Canonical source text for a rule; parseRule(prettyPrint(ast)) is
// structurally equal to ast.
std::string prettyPrint(const RuleAst& ast);

}  // namespace crysl::frontend
