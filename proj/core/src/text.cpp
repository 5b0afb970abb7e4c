#include "schemev/text.hpp"

#include "java_lexer.hpp"

namespace schemev {

namespace {

constexpr char kReplacement[] = "\xEF\xBF\xBD";  // U+FFFD

// Length of a valid UTF-8 sequence starting at `i`, or 0 when invalid.
std::size_t utf8_sequence_length(std::string_view s, std::size_t i) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return 1;
  std::size_t len;
  unsigned min_cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    min_cp = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    min_cp = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    min_cp = 0x10000;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  unsigned cp = b0 & (0x7F >> len);
  for (std::size_t k = 1; k < len; ++k) {
    unsigned char b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min_cp) return 0;            // overlong
  if (cp > 0x10FFFF) return 0;
  if (cp >= 0xD800 && cp <= 0xDFFF) return 0;  // surrogate
  return len;
}

}  // namespace

std::string decode_utf8_lossy(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xEF\xBB\xBF") i = 3;  // BOM
  while (i < bytes.size()) {
    unsigned char b = static_cast<unsigned char>(bytes[i]);
    if (b < 0x80) {
      out.push_back(bytes[i]);
      ++i;
      continue;
    }
    std::size_t len = utf8_sequence_length(bytes, i);
    if (len == 0) {
      out.append(kReplacement);
      ++i;
    } else {
      out.append(bytes.substr(i, len));
      i += len;
    }
  }
  return out;
}

std::string join_tokens_canonical(const std::vector<std::string_view>& tokens) {
  std::string out;
  for (const auto& tok : tokens) {
    if (tok.empty()) continue;
    if (!out.empty() && detail::is_word_byte(out.back()) &&
        detail::is_word_byte(tok.front()))
      out.push_back(' ');
    out.append(tok);
  }
  return out;
}

std::string canonicalize_snippet(std::string_view text) {
  std::string decoded = decode_utf8_lossy(text);
  auto lexed = detail::lex_java(decoded);
  std::vector<std::string_view> parts;
  parts.reserve(lexed.tokens.size());
  for (const auto& tok : lexed.tokens) parts.push_back(tok.text);
  return join_tokens_canonical(parts);
}

std::vector<bool> classify_code_lines(std::string_view text) {
  return detail::lex_java(text).line_has_code;
}

std::size_t count_lines(std::string_view text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  if (!text.empty() && text.back() != '\n') ++n;
  return n;
}

}  // namespace schemev
