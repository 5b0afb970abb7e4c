// Text utilities: lossy UTF-8 decoding, token-level canonicalization, and
// comment-aware code-line classification for Java-like source text.
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace schemev {

// Replaces invalid UTF-8 sequences with U+FFFD and strips a leading BOM.
// The result is always valid UTF-8.
std::string decode_utf8_lossy(std::string_view bytes);

// Canonicalizes a token sequence into a single string: adjacent tokens are
// joined without spaces unless both sides are word-like (identifier/number),
// e.g. {"Map","<","String",",","List","<","Mission",">",">"} ->
// "Map<String,List<Mission>>". Idempotent when re-tokenized.
std::string join_tokens_canonical(const std::vector<std::string_view>& tokens);

// Canonicalizes arbitrary Java-ish expression or type text by tokenizing it
// (comment- and string-aware) and re-joining. canonicalize(canonicalize(x))
// == canonicalize(x).
std::string canonicalize_snippet(std::string_view text);

// Per-line classification of `text`: flags[i] is true when 1-based line i+1
// contains at least one character of code (anything outside comments that is
// not whitespace). String literal contents count as code.
std::vector<bool> classify_code_lines(std::string_view text);

// Splits text into lines on '\n' (the trailing fragment counts even without
// a newline). Returns the number of lines; empty text has zero lines.
std::size_t count_lines(std::string_view text);

}  // namespace schemev
