#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace crysl {

struct SourcePos {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
  friend auto operator<=>(const SourcePos&, const SourcePos&) = default;
};

enum class ErrorKind {
  Io,
  Syntax,
  DuplicateSection,
  MissingMandatorySection,
  DuplicateDeclaration,
  UnresolvedLabel,
  UnresolvedVariable,
  UnknownType,
  UnknownFunction,
  KindMismatch,
  DuplicateSpec,
  AnchorNotInAutomaton,
  UndefinedFunction,
  UseBeforeDef,
  MissingMain,
  Kind,
};

const char* toString(ErrorKind kind);

// A positioned diagnostic. Every frontend (rule files, MiniJ, traces) reports
// failures through this type so callers can render a uniform
// "file:line:col: kind: message" line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, SourcePos pos = {},
        std::string file = {}, std::set<std::string> expected = {});

  ErrorKind kind() const { return kind_; }
  const std::string& message() const { return message_; }
  const SourcePos& pos() const { return pos_; }
  const std::string& file() const { return file_; }
  const std::set<std::string>& expected() const { return expected_; }

  Error withFile(std::string file) const;

  // "file:line:col: Kind: message [expected: a, b]"
  std::string render() const;

 private:
  ErrorKind kind_;
  std::string message_;
  SourcePos pos_;
  std::string file_;
  std::set<std::string> expected_;
};

// Several independent errors, e.g. one per rule file of a ruleset.
class ErrorList : public std::runtime_error {
 public:
  explicit ErrorList(std::vector<Error> errors);

  const std::vector<Error>& errors() const { return errors_; }

 private:
  std::vector<Error> errors_;
};

}  // namespace crysl
