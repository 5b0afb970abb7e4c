#include "java_lexer.hpp"

#include <cctype>

namespace schemev::detail {

bool is_word_byte(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '$' || u >= 0x80;
}

namespace {

bool is_space_byte(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isspace(u);
}

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {
    result_.line_count = 0;
    for (char c : text_)
      if (c == '\n') ++result_.line_count;
    if (!text_.empty() && text_.back() != '\n') ++result_.line_count;
    result_.line_has_code.assign(result_.line_count, false);
  }

  LexResult run() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (is_space_byte(c)) {
        ++pos_;
      } else if (c == '/' && peek(1) == '/') {
        skip_line_comment();
      } else if (c == '/' && peek(1) == '*') {
        skip_block_comment();
      } else if (c == '"' && peek(1) == '"' && peek(2) == '"') {
        scan_text_block();
      } else if (c == '"') {
        scan_quoted('"', TokKind::Str);
      } else if (c == '\'') {
        scan_quoted('\'', TokKind::CharLit);
      } else if (is_word_byte(c) && !std::isdigit(static_cast<unsigned char>(c))) {
        scan_identifier();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        scan_number();
      } else {
        emit(pos_, pos_ + 1, line_, TokKind::Punct);
        ++pos_;
      }
    }
    return std::move(result_);
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void mark_lines(int from, int to) {
    for (int l = from; l <= to; ++l) {
      std::size_t idx = static_cast<std::size_t>(l) - 1;
      if (idx < result_.line_has_code.size()) result_.line_has_code[idx] = true;
    }
  }

  void emit(std::size_t begin, std::size_t end, int start_line, TokKind kind) {
    Token tok;
    tok.kind = kind;
    tok.text = text_.substr(begin, end - begin);
    tok.line = start_line;
    tok.end_line = line_;
    tok.offset = begin;
    mark_lines(start_line, line_);
    result_.tokens.push_back(tok);
  }

  void skip_line_comment() {
    while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
  }

  void skip_block_comment() {
    pos_ += 2;
    while (pos_ < text_.size()) {
      if (text_[pos_] == '\n') {
        ++line_;
        ++pos_;
      } else if (text_[pos_] == '*' && peek(1) == '/') {
        pos_ += 2;
        return;
      } else {
        ++pos_;
      }
    }
    // unterminated: runs to EOF
  }

  void scan_text_block() {
    std::size_t begin = pos_;
    int start_line = line_;
    pos_ += 3;
    while (pos_ < text_.size()) {
      if (text_[pos_] == '\n') {
        ++line_;
        ++pos_;
      } else if (text_[pos_] == '\\') {
        pos_ += 2;
      } else if (text_[pos_] == '"' && peek(1) == '"' && peek(2) == '"') {
        pos_ += 3;
        break;
      } else {
        ++pos_;
      }
    }
    emit(begin, pos_ > text_.size() ? text_.size() : pos_, start_line, TokKind::Str);
  }

  void scan_quoted(char delim, TokKind kind) {
    std::size_t begin = pos_;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != delim && text_[pos_] != '\n') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size() && text_[pos_ + 1] != '\n')
        ++pos_;
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == delim) ++pos_;
    // unterminated literal ends at the newline; tolerated
    emit(begin, pos_, line_, kind);
  }

  void scan_identifier() {
    std::size_t begin = pos_;
    while (pos_ < text_.size() && is_word_byte(text_[pos_])) ++pos_;
    emit(begin, pos_, line_, TokKind::Ident);
  }

  void scan_number() {
    std::size_t begin = pos_;
    // tolerant numeric literal: digits, hex/binary letters, '_', '.', suffixes
    while (pos_ < text_.size() &&
           (is_word_byte(text_[pos_]) || text_[pos_] == '.'))
      ++pos_;
    emit(begin, pos_, line_, TokKind::Number);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  LexResult result_;
};

}  // namespace

LexResult lex_java(std::string_view text) { return Scanner(text).run(); }

}  // namespace schemev::detail
