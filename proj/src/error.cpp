#include "crysl/error.hpp"

#include <sstream>

namespace crysl {

const char* toString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return "IoError";
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::DuplicateSection: return "DuplicateSection";
    case ErrorKind::MissingMandatorySection: return "MissingMandatorySection";
    case ErrorKind::DuplicateDeclaration: return "DuplicateDeclaration";
    case ErrorKind::UnresolvedLabel: return "UnresolvedLabel";
    case ErrorKind::UnresolvedVariable: return "UnresolvedVariable";
    case ErrorKind::UnknownType: return "UnknownType";
    case ErrorKind::UnknownFunction: return "UnknownFunction";
    case ErrorKind::KindMismatch: return "KindMismatch";
    case ErrorKind::DuplicateSpec: return "DuplicateSpec";
    case ErrorKind::AnchorNotInAutomaton: return "AnchorNotInAutomaton";
    case ErrorKind::UndefinedFunction: return "UndefinedFunction";
    case ErrorKind::UseBeforeDef: return "UseBeforeDef";
    case ErrorKind::MissingMain: return "MissingMain";
    case ErrorKind::Kind: return "KindError";
  }
  return "Error";
}

namespace {

std::string compose(ErrorKind kind, const std::string& message, SourcePos pos,
                    const std::string& file,
                    const std::set<std::string>& expected) {
  std::ostringstream out;
  if (!file.empty()) out << file << ':';
  if (pos.line > 0) out << pos.line << ':' << pos.column << ':';
  if (out.tellp() > 0) out << ' ';
  out << toString(kind) << ": " << message;
  if (!expected.empty()) {
    out << " [expected: ";
    bool first = true;
    for (const auto& e : expected) {
      if (!first) out << ", ";
      out << e;
      first = false;
    }
    out << ']';
  }
  return out.str();
}

}  // namespace

Error::Error(ErrorKind kind, std::string message, SourcePos pos,
             std::string file, std::set<std::string> expected)
    : std::runtime_error(compose(kind, message, pos, file, expected)),
      kind_(kind),
      message_(std::move(message)),
      pos_(pos),
      file_(std::move(file)),
      expected_(std::move(expected)) {}

Error Error::withFile(std::string file) const {
  return Error(kind_, message_, pos_, std::move(file), expected_);
}

std::string Error::render() const { return what(); }

namespace {

std::string joinErrors(const std::vector<Error>& errors) {
  std::string text;
  for (const auto& e : errors) {
    if (!text.empty()) text += '\n';
    text += e.render();
  }
  return text;
}

}  // namespace

ErrorList::ErrorList(std::vector<Error> errors)
    : std::runtime_error(joinErrors(errors)), errors_(std::move(errors)) {}

}  // namespace crysl
