#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "crysl/frontend/ast.hpp"
#include "crysl/frontend/type_registry.hpp"

namespace crysl::frontend {

// A rule whose labels, variables and types all resolve.
struct ResolvedRule {
  RuleAst ast;
  // Object name -> declared type.
  std::map<std::string, std::string> varTypes;
  // Event label or aggregate name -> indices into ast.events (sorted,
  // aggregates fully expanded).
  std::map<std::string, std::vector<std::size_t>> labelEvents;

  const std::string& specType() const { return ast.specType; }
  // Declared type of a rule variable; the spec type for "this"; empty for
  // the wildcard or unknown names.
  std::string typeOf(const std::string& var) const;
  ValueKind kindOf(const ValueRef& ref) const;
};

// Errors: UnresolvedLabel, UnresolvedVariable, UnknownType, UnknownFunction,
// KindMismatch, DuplicateDeclaration. The rule's own SPEC type is always
// considered known.
ResolvedRule validateRule(const RuleAst& ast, const TypeRegistry& registry);

// Auxiliary functions usable in constraints and predicate arguments.
bool isAuxiliaryFunction(const std::string& name);

struct Ruleset {
  TypeRegistry types;
  std::vector<ResolvedRule> rules;  // sorted by specType
  // Digest of the rule texts (keyed by file name, not path) and manifest.
  std::string fingerprint;
};

// Reads every `*.crysl` file of a directory plus an optional
// `types.manifest`. All SPEC types of the directory are added to the
// registry. Failures of individual files are collected and thrown together
// as ErrorList (each Error carries its file); DuplicateSpec is reported for
// the second file declaring an already-seen SPEC type.
Ruleset parseRuleset(const std::filesystem::path& dir);

// Same, over in-memory sources; `manifest` may be empty.
Ruleset parseRuleset(const std::vector<RuleSource>& sources,
                     const std::string& manifest = {});

}  // namespace crysl::frontend
