#pragma once

#include <string>
#include <vector>

namespace nullcause::minil::detail {

enum class TokKind { Ident, Keyword, Int, Str, Punct, End };

struct Token {
  TokKind kind;
  std::string text;    // identifier/keyword name, punct spelling
  long long value = 0;
  std::string str;     // unescaped string literal contents
  int offset = 0;      // byte offset of first char
  int end = 0;         // byte offset one past last char
  int line = 1;
  int col = 1;
};

// Tokenizes a whole Minil source file. '//' comments and whitespace are
// skipped; a final End token is always appended.
std::vector<Token> lex(const std::string& source);

bool is_keyword(const std::string& s);

}  // namespace nullcause::minil::detail
