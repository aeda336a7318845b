#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "crysl/error.hpp"

namespace crysl {

struct Token {
  enum class Kind { Ident, Integer, String, Punct, End };

  Kind kind = Kind::End;
  std::string text;  // identifier/punctuation spelling, or unescaped string
  long long integer = 0;
  SourcePos pos;

  bool is(Kind k, std::string_view t) const { return kind == k && text == t; }
  bool isPunct(std::string_view t) const { return is(Kind::Punct, t); }
  bool isIdent(std::string_view t) const { return is(Kind::Ident, t); }
  std::string describe() const;
};

// Tokenizes C-like text: identifiers ([A-Za-z_$][A-Za-z0-9_$]*), decimal
// integers, double-quoted strings with \" \\ \n \t escapes, "//" line
// comments, and the punctuation used by rule files and MiniJ (":=" and "=>"
// are single tokens). Throws Error(Syntax) on malformed input.
std::vector<Token> tokenize(std::string_view text);

// Cursor over a token vector shared by the recursive-descent parsers.
class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> tokens);

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool atEnd() const { return peek().kind == Token::Kind::End; }

  bool acceptPunct(std::string_view p);
  bool acceptIdent(std::string_view word);
  const Token& expectPunct(std::string_view p);
  const Token& expectIdent(std::string_view what = "identifier");
  const Token& expectIdentText(std::string_view word);

  [[noreturn]] void fail(std::set<std::string> expected) const;
  [[noreturn]] void failAt(const Token& tok, const std::string& message,
                           std::set<std::string> expected = {}) const;

 private:
  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

}  // namespace crysl
