#include "lexer.hpp"

#include <cctype>

#include "nullcause/minil/parse.hpp"

namespace nullcause::minil::detail {

bool is_keyword(const std::string& s) {
  static const char* kw[] = {"class", "field", "method", "test",  "var",
                             "return", "if",   "else",   "while", "assert",
                             "new",    "null", "true",   "false", "this"};
  for (const char* k : kw)
    if (s == k) return true;
  return false;
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  std::size_t pos = 0;
  int line = 1, col = 1;

  auto bump = [&](std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  };

  while (pos < src.size()) {
    char c = src[pos];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      bump(1);
      continue;
    }
    if (c == '/' && pos + 1 < src.size() && src[pos + 1] == '/') {
      while (pos < src.size() && src[pos] != '\n') bump(1);
      continue;
    }
    Token t;
    t.offset = static_cast<int>(pos);
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) ||
              src[pos] == '_')) {
        s += src[pos];
        bump(1);
      }
      t.kind = is_keyword(s) ? TokKind::Keyword : TokKind::Ident;
      t.text = std::move(s);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      long long v = 0;
      while (pos < src.size() &&
             std::isdigit(static_cast<unsigned char>(src[pos]))) {
        v = v * 10 + (src[pos] - '0');
        bump(1);
      }
      t.kind = TokKind::Int;
      t.value = v;
    } else if (c == '"') {
      bump(1);
      std::string s;
      for (;;) {
        if (pos >= src.size() || src[pos] == '\n')
          throw ParseError("unterminated string literal", t.line, t.col);
        if (src[pos] == '\\' && pos + 1 < src.size()) {
          char e = src[pos + 1];
          if (e == '"' || e == '\\') {
            s += e;
            bump(2);
            continue;
          }
          if (e == 'n') {
            s += '\n';
            bump(2);
            continue;
          }
        }
        if (src[pos] == '"') {
          bump(1);
          break;
        }
        s += src[pos];
        bump(1);
      }
      t.kind = TokKind::Str;
      t.str = std::move(s);
    } else {
      static const char* two[] = {"==", "!=", "&&", "||"};
      std::string p(1, c);
      if (pos + 1 < src.size()) {
        std::string pair = p + src[pos + 1];
        for (const char* op : two)
          if (pair == op) p = pair;
      }
      static const std::string singles = "{}();,.=<+-*!";
      if (p.size() == 1 && singles.find(c) == std::string::npos)
        throw ParseError(std::string("unexpected character '") + c + "'", line,
                         col);
      bump(p.size());
      t.kind = TokKind::Punct;
      t.text = std::move(p);
    }
    t.end = static_cast<int>(pos);
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = TokKind::End;
  end.offset = static_cast<int>(pos);
  end.end = static_cast<int>(pos);
  end.line = line;
  end.col = col;
  out.push_back(std::move(end));
  return out;
}

}  // namespace nullcause::minil::detail
