#include "schemev/java_parser.hpp"

#include <algorithm>
#include <set>

#include "java_lexer.hpp"
#include "schemev/errors.hpp"
#include "schemev/text.hpp"

namespace schemev {

namespace {

using detail::LexResult;
using detail::Token;
using detail::TokKind;

const std::set<std::string_view> kModifiers = {
    "public", "protected", "private",  "static",       "final",
    "abstract", "default", "native",   "synchronized", "transient",
    "volatile", "strictfp", "sealed"};

// Modifiers worth keeping on the surface model.
const std::set<std::string_view> kStoredModifiers = {
    "public", "protected", "private", "static", "final", "transient"};

// Thrown when brace matching runs off the end of the file; the enclosing
// declaration cannot be recovered.
struct BodyUnbalanced {};

// Thrown when a single member is malformed; recovery skips to the next one.
struct MemberMalformed {};

const char* to_string_kind(ClassKind kind) {
  switch (kind) {
    case ClassKind::Class: return "class";
    case ClassKind::AbstractClass: return "abstractClass";
    case ClassKind::Interface: return "interface";
    case ClassKind::Enum: return "enum";
  }
  return "class";
}

class Parser {
 public:
  Parser(std::string decoded, std::string path)
      : text_(std::move(decoded)), path_(std::move(path)) {
    lex_ = detail::lex_java(text_);
  }

  ParseResult run() {
    int junk_runs = 0;
    try {
      parse_header();
    } catch (const BodyUnbalanced&) {
      ++junk_runs;
      diag("unterminated construct in file header");
    }
    while (!at_end()) {
      std::size_t before = pos_;
      try {
        std::vector<AnnotationUse> annos;
        std::size_t decl_start = pos_;
        collect_annotations(annos);
        std::vector<std::string> mods = collect_modifiers();
        if (at_end()) break;
        if (is_type_keyword()) {
          ClassDecl decl = parse_type_decl(std::move(annos), mods, decl_start,
                                           result_.file.package_name);
          result_.file.classes.push_back(std::move(decl));
        } else if (is_annotation_type_start()) {
          skip_annotation_type_decl();
        } else {
          ++junk_runs;
          diag("unrecognized top-level content at line " +
               std::to_string(cur().line));
          panic_skip_top();
        }
      } catch (const BodyUnbalanced&) {
        ++junk_runs;
        diag("unbalanced declaration dropped");
      } catch (const MemberMalformed&) {
        ++junk_runs;
        diag("malformed declaration dropped");
        panic_skip_top();
      }
      if (pos_ == before && !at_end()) advance();  // guarantee progress
    }
    if (result_.file.classes.empty() && junk_runs > 0)
      throw ParseFailure(path_ + ": no class declarations recoverable");
    return std::move(result_);
  }

 private:
  // ---- token primitives ----------------------------------------------

  bool at_end() const { return pos_ >= lex_.tokens.size(); }

  const Token& cur() const { return lex_.tokens[pos_]; }

  const Token* peek(std::size_t ahead = 1) const {
    return pos_ + ahead < lex_.tokens.size() ? &lex_.tokens[pos_ + ahead]
                                             : nullptr;
  }

  void advance() { ++pos_; }

  bool is(std::string_view s) const { return !at_end() && cur().text == s; }

  bool accept(std::string_view s) {
    if (!is(s)) return false;
    advance();
    return true;
  }

  bool is_ident() const { return !at_end() && cur().kind == TokKind::Ident; }

  void diag(const std::string& msg) {
    result_.diagnostics.push_back(path_ + ": " + msg);
  }

  // ---- header ----------------------------------------------------------

  void parse_header() {
    // package-info style annotations before `package` are discarded; if the
    // leading annotations belong to the first type declaration instead, we
    // must not consume them here.
    std::size_t mark = pos_;
    std::vector<AnnotationUse> annos;
    collect_annotations(annos);
    if (is("package")) {
      advance();
      result_.file.package_name = parse_dotted_name();
      accept(";");
    } else {
      pos_ = mark;  // annotations belong to a declaration
    }
    while (is("import")) {
      advance();
      accept("static");
      std::string name = parse_dotted_name();
      if (accept(".")) {
        if (accept("*")) name += ".*";
      } else if (is("*")) {  // tolerated: import a.b.*
        advance();
        name += ".*";
      }
      accept(";");
      if (!name.empty()) result_.file.imports.push_back(std::move(name));
    }
  }

  std::string parse_dotted_name() {
    std::string name;
    while (is_ident()) {
      name.append(cur().text);
      advance();
      if (is(".") && peek() && peek()->kind == TokKind::Ident &&
          peek()->text != "*") {
        name.push_back('.');
        advance();
      } else {
        break;
      }
    }
    return name;
  }

  // ---- annotations -------------------------------------------------------

  bool is_annotation_type_start() const {
    return is("@") && peek() && peek()->text == "interface";
  }

  void collect_annotations(std::vector<AnnotationUse>& out) {
    while (is("@") && !is_annotation_type_start()) {
      advance();
      if (!is_ident()) return;  // stray '@'; let the caller panic
      AnnotationUse anno;
      anno.raw_name = parse_dotted_name();
      auto dot = anno.raw_name.rfind('.');
      anno.simple_name =
          dot == std::string::npos ? anno.raw_name : anno.raw_name.substr(dot + 1);
      if (is("(")) {
        std::string args = capture_balanced_parens();
        if (!args.empty()) anno.args_text = std::move(args);
        // `@Foo()` normalizes to the bare form
      }
      out.push_back(std::move(anno));
    }
  }

  // Consumes a balanced (...) group, returning the canonical inner text.
  std::string capture_balanced_parens() {
    advance();  // '('
    int depth = 1;
    std::vector<std::string_view> parts;
    while (!at_end()) {
      if (is("(")) {
        ++depth;
      } else if (is(")")) {
        --depth;
        if (depth == 0) {
          advance();
          break;
        }
      }
      parts.push_back(cur().text);
      advance();
    }
    if (depth != 0) throw BodyUnbalanced{};
    return join_tokens_canonical(parts);
  }

  std::vector<std::string> collect_modifiers() {
    std::vector<std::string> mods;
    while (is_ident() && kModifiers.count(cur().text)) {
      mods.emplace_back(cur().text);
      advance();
    }
    return mods;
  }

  static bool has_mod(const std::vector<std::string>& mods,
                      std::string_view m) {
    return std::find(mods.begin(), mods.end(), m) != mods.end();
  }

  // ---- declarations --------------------------------------------------

  bool is_type_keyword() const {
    return is("class") || is("interface") || is("enum");
  }

  ClassDecl parse_type_decl(std::vector<AnnotationUse> annos,
                            const std::vector<std::string>& mods,
                            std::size_t decl_start_idx,
                            const std::string& enclosing) {
    ClassDecl decl;
    decl.annotations = std::move(annos);
    if (is("interface"))
      decl.kind = ClassKind::Interface;
    else if (is("enum"))
      decl.kind = ClassKind::Enum;
    else
      decl.kind = has_mod(mods, "abstract") ? ClassKind::AbstractClass
                                            : ClassKind::Class;
    advance();  // keyword
    if (at_end()) throw BodyUnbalanced{};
    if (!is_ident()) throw MemberMalformed{};
    decl.simple_name = cur().text;
    decl.qualified_name =
        enclosing.empty() ? decl.simple_name : enclosing + "." + decl.simple_name;
    advance();
    if (is("<")) skip_angles();
    if (accept("extends")) {
      decl.superclass_name = parse_type_text();
      if (decl.kind == ClassKind::Interface) {
        while (accept(",")) parse_type_text();  // extra super-interfaces
      }
    }
    if (accept("implements")) {
      parse_type_text();
      while (accept(",")) parse_type_text();
    }
    // tolerate stray header tokens up to the body
    while (!at_end() && !is("{") && !is(";") && !is("}")) advance();
    if (at_end()) throw BodyUnbalanced{};
    if (!accept("{")) throw MemberMalformed{};

    decl.line_span.start = lex_.tokens[decl_start_idx].line;
    if (decl.kind == ClassKind::Enum) parse_enum_constants();
    int end_line = parse_members(decl);
    decl.line_span.end = end_line;
    decl.code_line_count = code_lines_in_span(decl.line_span);
    return decl;
  }

  void parse_enum_constants() {
    while (!at_end()) {
      if (is(";")) {
        advance();
        return;  // member section follows
      }
      if (is("}")) return;  // constants only; parse_members consumes '}'
      std::vector<AnnotationUse> discard;
      collect_annotations(discard);
      if (is_ident()) {
        advance();
        if (is("(")) skip_parens();
        if (is("{")) skip_braces();
        if (accept(",")) continue;
        continue;
      }
      advance();  // junk inside the constant list; keep scanning
    }
    throw BodyUnbalanced{};
  }

  // Parses members until the closing '}' of the body; returns its line.
  int parse_members(ClassDecl& decl) {
    while (true) {
      if (at_end()) throw BodyUnbalanced{};
      if (is("}")) {
        int end_line = cur().line;
        advance();
        return end_line;
      }
      if (accept(";")) continue;

      std::size_t member_start = pos_;
      std::vector<AnnotationUse> annos;
      collect_annotations(annos);
      std::vector<std::string> mods = collect_modifiers();

      if (is_type_keyword()) {
        try {
          decl.nested.push_back(
              parse_type_decl(std::move(annos), mods, member_start,
                              decl.qualified_name));
        } catch (const MemberMalformed&) {
          diag("malformed nested declaration in " + decl.qualified_name);
          panic_skip_member();
        }
        continue;
      }
      if (is_annotation_type_start()) {
        skip_annotation_type_decl();
        continue;
      }
      if (is("{")) {  // instance or static initializer block
        skip_braces();
        continue;
      }
      try {
        parse_field_or_method(decl, std::move(annos), mods);
      } catch (const MemberMalformed&) {
        diag("malformed member in " + decl.qualified_name + " near line " +
             std::to_string(at_end() ? decl.line_span.start : cur().line));
        panic_skip_member();
      }
    }
  }

  void parse_field_or_method(ClassDecl& decl, std::vector<AnnotationUse> annos,
                             const std::vector<std::string>& mods) {
    if (is("<")) {
      skip_angles();  // generic method type parameters
    }
    if (!is_ident()) throw MemberMalformed{};
    std::size_t type_begin = pos_;
    std::string type_text = parse_type_text();
    bool plain_name =
        pos_ == type_begin + 1;  // single identifier, no generics/dims/dots

    if (is("(") && plain_name) {  // constructor
      skip_parens();
      skip_method_tail();
      return;
    }
    if (!is_ident()) throw MemberMalformed{};
    std::string name{cur().text};
    advance();
    if (is("(")) {  // method
      skip_parens();
      skip_method_tail();
      return;
    }

    std::vector<std::string> stored;
    for (const auto& m : mods)
      if (kStoredModifiers.count(m)) stored.push_back(m);

    while (true) {
      std::string dims;
      while (is("[")) {
        advance();
        if (!accept("]")) throw MemberMalformed{};
        dims += "[]";
      }
      FieldDecl field;
      field.name = name;
      field.type_text = type_text + dims;
      field.modifiers = stored;
      field.annotations = annos;
      if (accept("=")) {
        std::string init = capture_initializer();
        field.initializer_text = std::move(init);
      }
      decl.fields.push_back(std::move(field));
      if (accept(",")) {
        if (!is_ident()) throw MemberMalformed{};
        name = cur().text;
        advance();
        continue;
      }
      if (accept(";")) return;
      throw MemberMalformed{};
    }
  }

  // Canonical type text: dotted name, one balanced generic group, array dims.
  std::string parse_type_text() {
    std::vector<std::string_view> parts;
    if (!is_ident()) throw MemberMalformed{};
    parts.push_back(cur().text);
    advance();
    while (is(".") && peek() && peek()->kind == TokKind::Ident) {
      parts.push_back(cur().text);
      advance();
      parts.push_back(cur().text);
      advance();
    }
    if (is("<")) capture_angles(parts);
    while (is("[") && peek() && peek()->text == "]") {
      parts.push_back(cur().text);
      advance();
      parts.push_back(cur().text);
      advance();
    }
    return join_tokens_canonical(parts);
  }

  // Balanced '<...>' in a type position; malformed content aborts the member.
  void capture_angles(std::vector<std::string_view>& parts) {
    int depth = 0;
    while (!at_end()) {
      if (is("<")) {
        ++depth;
      } else if (is(">")) {
        --depth;
      } else if (is(";") || is("{") || is("}")) {
        throw MemberMalformed{};
      }
      parts.push_back(cur().text);
      advance();
      if (depth == 0) return;
    }
    throw BodyUnbalanced{};
  }

  void skip_angles() {
    std::vector<std::string_view> discard;
    capture_angles(discard);
  }

  // Initializer expression: raw tokens until the declarator separator.
  std::string capture_initializer() {
    int paren = 0, bracket = 0, brace = 0, angle = 0;
    std::vector<std::string_view> parts;
    const Token* prev = nullptr;
    while (!at_end()) {
      const Token& tok = cur();
      if (paren == 0 && bracket == 0 && brace == 0) {
        if (tok.text == ";") return join_tokens_canonical(parts);
        if (tok.text == "," && angle == 0) return join_tokens_canonical(parts);
        if (tok.text == "}") return join_tokens_canonical(parts);  // underflow
      }
      if (tok.text == "(") ++paren;
      else if (tok.text == ")") { if (--paren < 0) return join_tokens_canonical(parts); }
      else if (tok.text == "[") ++bracket;
      else if (tok.text == "]") { if (--bracket < 0) return join_tokens_canonical(parts); }
      else if (tok.text == "{") ++brace;
      else if (tok.text == "}") --brace;
      else if (tok.text == "<") {
        // generic-argument heuristic: '<' glued to an identifier opens a group
        if (prev && prev->kind == TokKind::Ident &&
            prev->offset + prev->text.size() == tok.offset)
          ++angle;
      } else if (tok.text == ">") {
        if (angle > 0) --angle;
      }
      parts.push_back(tok.text);
      prev = &tok;
      advance();
    }
    throw BodyUnbalanced{};
  }

  void skip_parens() {
    int depth = 0;
    while (!at_end()) {
      if (is("(")) ++depth;
      else if (is(")") && --depth == 0) {
        advance();
        return;
      }
      advance();
    }
    throw BodyUnbalanced{};
  }

  void skip_braces() {
    int depth = 0;
    while (!at_end()) {
      if (is("{")) ++depth;
      else if (is("}") && --depth == 0) {
        advance();
        return;
      }
      advance();
    }
    throw BodyUnbalanced{};
  }

  // After a method's parameter list: default value / throws clause / body.
  void skip_method_tail() {
    while (!at_end()) {
      if (is("{")) {
        skip_braces();
        return;
      }
      if (accept(";")) return;
      if (is("}")) return;  // abstract-ish declaration ran into body end
      advance();
    }
    throw BodyUnbalanced{};
  }

  void skip_annotation_type_decl() {
    // '@' 'interface' Name { ... }  -- not schema material, skipped whole
    advance();
    advance();
    while (!at_end() && !is("{") && !is(";")) advance();
    if (is("{")) skip_braces();
    else accept(";");
  }

  void panic_skip_member() {
    while (!at_end()) {
      if (is(";")) {
        advance();
        return;
      }
      if (is("}")) return;  // leave body close for parse_members
      if (is("{")) {
        skip_braces();
        return;
      }
      advance();
    }
  }

  void panic_skip_top() {
    while (!at_end()) {
      if (is_type_keyword() || is("@")) return;
      if (is("{")) {
        try {
          skip_braces();
        } catch (const BodyUnbalanced&) {
          pos_ = lex_.tokens.size();
        }
        continue;
      }
      if (is(";")) {
        advance();
        return;
      }
      advance();
    }
  }

  int code_lines_in_span(LineSpan span) const {
    int count = 0;
    for (int l = span.start; l <= span.end; ++l) {
      std::size_t idx = static_cast<std::size_t>(l) - 1;
      if (idx < lex_.line_has_code.size() && lex_.line_has_code[idx]) ++count;
    }
    return count;
  }

  std::string text_;
  std::string path_;
  LexResult lex_;
  std::size_t pos_ = 0;
  ParseResult result_;
};

}  // namespace

const char* to_string(ClassKind kind) { return to_string_kind(kind); }

ParseResult parse_source(std::string_view text, std::string path) {
  Parser parser(decode_utf8_lossy(text), path);
  ParseResult result = parser.run();
  result.file.path = std::move(path);
  return result;
}

int count_code_lines(std::string_view text, LineSpan span) {
  std::string decoded = decode_utf8_lossy(text);
  std::vector<bool> flags = classify_code_lines(decoded);
  int count = 0;
  for (int l = span.start; l <= span.end; ++l) {
    std::size_t idx = static_cast<std::size_t>(l) - 1;
    if (idx < flags.size() && flags[idx]) ++count;
  }
  return count;
}

}  // namespace schemev
