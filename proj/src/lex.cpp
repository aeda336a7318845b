#include "crysl/lex.hpp"

#include <cctype>
#include <charconv>

namespace crysl {

std::string Token::describe() const {
  switch (kind) {
    case Kind::Ident: return "identifier '" + text + "'";
    case Kind::Integer: return "integer " + text;
    case Kind::String: return "string literal";
    case Kind::Punct: return "'" + text + "'";
    case Kind::End: return "end of input";
  }
  return "token";
}

namespace {

bool isIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool isIdentPart(char c) {
  return isIdentStart(c) || std::isdigit(static_cast<unsigned char>(c));
}

constexpr std::string_view kTwoCharPuncts[] = {":=", "=>"};
constexpr std::string_view kOneCharPuncts = ";:,()[]{}|?*+=.<>-@#";

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int column = 1;
  std::size_t i = 0;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.pos = {line, column};
    if (isIdentStart(c)) {
      std::size_t j = i;
      while (j < text.size() && isIdentPart(text[j])) ++j;
      tok.kind = Token::Kind::Ident;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      tok.kind = Token::Kind::Integer;
      tok.text = std::string(text.substr(i, j - i));
      auto [ptr, ec] =
          std::from_chars(text.data() + i, text.data() + j, tok.integer);
      if (ec != std::errc()) {
        throw Error(ErrorKind::Syntax, "integer literal out of range",
                    tok.pos);
      }
      if (j < text.size() && isIdentStart(text[j])) {
        throw Error(ErrorKind::Syntax, "malformed number", tok.pos);
      }
      advance(j - i);
    } else if (c == '"') {
      tok.kind = Token::Kind::String;
      advance(1);
      bool closed = false;
      while (i < text.size()) {
        char ch = text[i];
        if (ch == '"') {
          advance(1);
          closed = true;
          break;
        }
        if (ch == '\n') break;
        if (ch == '\\') {
          if (i + 1 >= text.size()) break;
          char esc = text[i + 1];
          switch (esc) {
            case '"': tok.text += '"'; break;
            case '\\': tok.text += '\\'; break;
            case 'n': tok.text += '\n'; break;
            case 't': tok.text += '\t'; break;
            default:
              throw Error(ErrorKind::Syntax,
                          std::string("unknown escape '\\") + esc + "'",
                          {line, column});
          }
          advance(2);
          continue;
        }
        tok.text += ch;
        advance(1);
      }
      if (!closed) {
        throw Error(ErrorKind::Syntax, "unterminated string literal", tok.pos);
      }
    } else {
      bool matched = false;
      for (auto p : kTwoCharPuncts) {
        if (text.substr(i, 2) == p) {
          tok.kind = Token::Kind::Punct;
          tok.text = std::string(p);
          advance(2);
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (kOneCharPuncts.find(c) == std::string_view::npos) {
          std::string shown;
          if (std::isprint(static_cast<unsigned char>(c))) {
            shown = std::string("'") + c + "'";
          } else {
            shown = "byte 0x";
            const char* hex = "0123456789abcdef";
            shown += hex[(static_cast<unsigned char>(c) >> 4) & 0xF];
            shown += hex[static_cast<unsigned char>(c) & 0xF];
          }
          throw Error(ErrorKind::Syntax, "unexpected character " + shown,
                      tok.pos);
        }
        tok.kind = Token::Kind::Punct;
        tok.text = std::string(1, c);
        advance(1);
      }
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = Token::Kind::End;
  end.pos = {line, column};
  out.push_back(end);
  return out;
}

TokenCursor::TokenCursor(std::vector<Token> tokens)
    : tokens_(std::move(tokens)) {
  if (tokens_.empty() || tokens_.back().kind != Token::Kind::End) {
    Token end;
    end.kind = Token::Kind::End;
    tokens_.push_back(end);
  }
}

const Token& TokenCursor::peek(std::size_t ahead) const {
  std::size_t at = index_ + ahead;
  if (at >= tokens_.size()) return tokens_.back();
  return tokens_[at];
}

const Token& TokenCursor::next() {
  const Token& tok = peek();
  if (index_ < tokens_.size() - 1) ++index_;
  return tok;
}

bool TokenCursor::acceptPunct(std::string_view p) {
  if (peek().isPunct(p)) {
    next();
    return true;
  }
  return false;
}

bool TokenCursor::acceptIdent(std::string_view word) {
  if (peek().isIdent(word)) {
    next();
    return true;
  }
  return false;
}

const Token& TokenCursor::expectPunct(std::string_view p) {
  if (!peek().isPunct(p)) fail({"'" + std::string(p) + "'"});
  return next();
}

const Token& TokenCursor::expectIdent(std::string_view what) {
  if (peek().kind != Token::Kind::Ident) fail({std::string(what)});
  return next();
}

const Token& TokenCursor::expectIdentText(std::string_view word) {
  if (!peek().isIdent(word)) fail({"'" + std::string(word) + "'"});
  return next();
}

void TokenCursor::fail(std::set<std::string> expected) const {
  failAt(peek(), "unexpected " + peek().describe(), std::move(expected));
}

void TokenCursor::failAt(const Token& tok, const std::string& message,
                         std::set<std::string> expected) const {
  throw Error(ErrorKind::Syntax, message, tok.pos, {}, std::move(expected));
}

}  // namespace crysl
