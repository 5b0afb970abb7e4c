// Internal: comment/string-aware token scanner for Java-like source text.
// Not installed; used by the parser and the text utilities.
#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace schemev::detail {

enum class TokKind { Ident, Number, Str, CharLit, Punct };

struct Token {
  TokKind kind;
  std::string_view text;  // view into the scanned buffer
  int line = 0;           // 1-based start line
  int end_line = 0;       // 1-based end line (text blocks may span lines)
  std::size_t offset = 0; // byte offset of the first character
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<bool> line_has_code;  // index 0 == line 1
  std::size_t line_count = 0;
};

// Scans the whole buffer. Comments are skipped; unterminated strings and
// comments are tolerated (they end at newline / EOF). Never throws.
LexResult lex_java(std::string_view text);

// Identifier-ish byte: ASCII alnum, '_', '$', or any non-ASCII byte.
bool is_word_byte(char c);

}  // namespace schemev::detail
