// Tolerant surface parser for Java source text. Extracts package, imports,
// class/interface/enum declarations, annotations and fields; method bodies
// are brace-matched and skipped. Designed to survive arbitrary input.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "schemev/source_model.hpp"

namespace schemev {

struct ParseResult {
  SourceFile file;
  std::vector<std::string> diagnostics;  // per-declaration recovery notes
};

// Parses source text (raw bytes, decoded as UTF-8 with replacement) into a
// SourceFile. Malformed declarations are dropped with a diagnostic; throws
// ParseFailure only when nothing could be recovered from a file that has
// declaration-like content (e.g. unbalanced braces at top level).
ParseResult parse_source(std::string_view text, std::string path);

// Number of lines within `span` that carry at least one token outside
// comments. A line holding only whitespace or comment text counts zero.
// `span` must lie within the text's line count.
int count_code_lines(std::string_view text, LineSpan span);

}  // namespace schemev
