// Surface model of a parsed Java source file: class declarations, fields,
// and annotation uses. No semantic analysis, just declaration structure.
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace schemev {

struct LineSpan {
  int start = 0;  // 1-based, inclusive
  int end = 0;    // 1-based, inclusive

  bool operator==(const LineSpan&) const = default;
};

struct AnnotationUse {
  std::string raw_name;     // as written, possibly qualified
  std::string simple_name;  // last dotted segment
  std::optional<std::string> args_text;  // canonical argument list, no parens

  bool operator==(const AnnotationUse&) const = default;
};

struct FieldDecl {
  std::string name;
  std::string type_text;  // canonical, e.g. "List<Mission>", "long", "String[]"
  std::vector<std::string> modifiers;  // subset of static/transient/final/public/protected/private
  std::vector<AnnotationUse> annotations;
  std::optional<std::string> initializer_text;  // canonical expression

  bool has_modifier(std::string_view m) const {
    for (const auto& mod : modifiers)
      if (mod == m) return true;
    return false;
  }

  bool operator==(const FieldDecl&) const = default;
};

enum class ClassKind { Class, AbstractClass, Interface, Enum };

const char* to_string(ClassKind kind);

struct ClassDecl {
  std::string simple_name;
  std::string qualified_name;  // package + enclosing chain + simple name
  ClassKind kind = ClassKind::Class;
  std::vector<AnnotationUse> annotations;
  std::optional<std::string> superclass_name;  // extends target, canonical text
  std::vector<FieldDecl> fields;
  std::vector<ClassDecl> nested;
  LineSpan line_span;
  int code_line_count = 0;  // non-comment, non-blank lines within line_span

  bool operator==(const ClassDecl&) const = default;
};

struct SourceFile {
  std::string path;          // repo-relative
  std::string package_name;  // dotted, or empty
  std::vector<std::string> imports;  // dotted, possibly wildcard-terminated
  std::vector<ClassDecl> classes;    // top-level declarations

  bool operator==(const SourceFile&) const = default;
};

}  // namespace schemev
