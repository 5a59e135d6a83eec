#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sqlaudit {

enum class TokenKind {
  Identifier,        // bare word, may be a keyword
  QuotedIdentifier,  // "x", `x` or [x], quotes stripped
  String,            // 'x', quotes stripped, '' unescaped
  Number,
  Punct,  // single char: ( ) , ; * . = < > + - / or two-char ops
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;   // decoded text
  std::string upper;  // uppercased text, for keyword checks
  size_t offset = 0;
  int line = 1;
  int column = 1;

  bool is_kw(std::string_view kw) const {
    return kind == TokenKind::Identifier && upper == kw;
  }
  bool is_punct(std::string_view p) const {
    return kind == TokenKind::Punct && text == p;
  }
  // True for any identifier-like token usable as a name.
  bool is_name() const {
    return kind == TokenKind::Identifier || kind == TokenKind::QuotedIdentifier;
  }
};

struct TokenizeError {
  std::string message;
  int line = 1;
  int column = 1;
};

// Tokenizes SQL text. Skips -- and /* */ comments. Throws ParseError on
// unterminated strings/comments.
std::vector<Token> tokenize_sql(std::string_view text);

}  // namespace sqlaudit
