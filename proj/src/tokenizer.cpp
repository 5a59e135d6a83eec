#include "sqlaudit/tokenizer.hpp"

#include <cctype>

#include "sqlaudit/sql_model.hpp"

namespace sqlaudit {

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

std::vector<Token> tokenize_sql(std::string_view text) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;

  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (i < text.size() && text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };

  auto make = [&](TokenKind kind, std::string decoded, size_t offset,
                  int tline, int tcol) {
    Token t;
    t.kind = kind;
    t.text = std::move(decoded);
    if (kind == TokenKind::Identifier) t.upper = to_upper(t.text);
    t.offset = offset;
    t.line = tline;
    t.column = tcol;
    out.push_back(std::move(t));
  };

  while (i < text.size()) {
    char c = text[i];
    int tline = line, tcol = col;
    size_t start = i;

    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      advance(2);
      while (i + 1 < text.size() && !(text[i] == '*' && text[i + 1] == '/'))
        advance(1);
      if (i + 1 >= text.size())
        throw ParseError("unterminated block comment", tline, tcol);
      advance(2);
      continue;
    }
    if (c == '\'') {
      std::string s;
      advance(1);
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == '\'') {
          if (i + 1 < text.size() && text[i + 1] == '\'') {
            s += '\'';
            advance(2);
            continue;
          }
          advance(1);
          closed = true;
          break;
        }
        s += text[i];
        advance(1);
      }
      if (!closed) throw ParseError("unterminated string literal", tline, tcol);
      make(TokenKind::String, std::move(s), start, tline, tcol);
      continue;
    }
    if (c == '"' || c == '`' || c == '[') {
      char close = c == '[' ? ']' : c;
      std::string s;
      advance(1);
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == close) {
          if (close != ']' && i + 1 < text.size() && text[i + 1] == close) {
            s += close;
            advance(2);
            continue;
          }
          advance(1);
          closed = true;
          break;
        }
        s += text[i];
        advance(1);
      }
      if (!closed)
        throw ParseError("unterminated quoted identifier", tline, tcol);
      make(TokenKind::QuotedIdentifier, std::move(s), start, tline, tcol);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < text.size() &&
         std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::string n;
      bool seen_dot = false, seen_exp = false;
      while (i < text.size()) {
        char d = text[i];
        if (std::isdigit(static_cast<unsigned char>(d))) {
          n += d;
        } else if (d == '.' && !seen_dot && !seen_exp) {
          seen_dot = true;
          n += d;
        } else if ((d == 'e' || d == 'E') && !seen_exp && i + 1 < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[i + 1])) ||
                    text[i + 1] == '+' || text[i + 1] == '-')) {
          seen_exp = true;
          n += d;
          advance(1);
          n += text[i];
        } else {
          break;
        }
        advance(1);
      }
      make(TokenKind::Number, std::move(n), start, tline, tcol);
      continue;
    }
    if (is_ident_start(c)) {
      std::string id;
      while (i < text.size() && is_ident_char(text[i])) {
        id += text[i];
        advance(1);
      }
      make(TokenKind::Identifier, std::move(id), start, tline, tcol);
      continue;
    }
    // Two-char operators first.
    if (i + 1 < text.size()) {
      std::string_view two = text.substr(i, 2);
      if (two == "<=" || two == ">=" || two == "<>" || two == "!=" ||
          two == "||") {
        make(TokenKind::Punct, std::string(two), start, tline, tcol);
        advance(2);
        continue;
      }
    }
    make(TokenKind::Punct, std::string(1, c), start, tline, tcol);
    advance(1);
  }

  Token end;
  end.kind = TokenKind::End;
  end.offset = text.size();
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

}  // namespace sqlaudit
