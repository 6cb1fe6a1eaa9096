#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iface_lens/diagnostic.hpp"
#include "iface_lens/java_lexer.hpp"

namespace iface_lens::java {

enum class TypeKind { Class, Interface, Enum, Annotation };

inline const char* to_string(TypeKind kind) {
  switch (kind) {
    case TypeKind::Class: return "class";
    case TypeKind::Interface: return "interface";
    case TypeKind::Enum: return "enum";
    case TypeKind::Annotation: return "annotation";
  }
  return "unknown";
}

/// Enums behave as classes and annotation types as interfaces.
inline bool is_class_like(TypeKind kind) {
  return kind == TypeKind::Class || kind == TypeKind::Enum;
}

struct ImportDecl {
  std::string target;  // without the trailing ".*"
  bool wildcard = false;
  bool static_import = false;

  friend bool operator==(const ImportDecl&, const ImportDecl&) = default;
};

struct RawMethod {
  std::string name;
  std::vector<std::string> parameter_type_names;  // erased, varargs as []
  bool is_public = false;
  bool is_static = false;
  bool is_default = false;
  bool is_constructor = false;

  friend bool operator==(const RawMethod&, const RawMethod&) = default;
};

struct TypeDecl {
  std::string qualified_name;
  std::string simple_name;
  std::string enclosing_name;  // qualified name of the enclosing type, or empty
  TypeKind kind = TypeKind::Class;
  bool is_abstract = false;
  std::vector<std::string> extends_names;     // erased, as written
  std::vector<std::string> implements_names;  // erased, as written
  std::vector<RawMethod> methods;
  std::vector<std::string> type_parameter_names;
  std::size_t line = 0;

  friend bool operator==(const TypeDecl&, const TypeDecl&) = default;
};

struct CompilationUnit {
  std::string file_path;
  std::string package_name;
  std::vector<ImportDecl> imports;
  std::vector<TypeDecl> types;  // nested types flattened, in source order
  Diagnostics diagnostics;

  friend bool operator==(const CompilationUnit&,
                         const CompilationUnit&) = default;
};

namespace detail {

struct ParseError : std::runtime_error {
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error(message), line(line) {}
  std::size_t line;
};

struct Modifiers {
  bool is_public = false;
  bool is_private = false;
  bool is_static = false;
  bool is_abstract = false;
  bool is_default = false;
};

inline bool is_primitive(std::string_view word) {
  return word == "boolean" || word == "byte" || word == "char" ||
         word == "short" || word == "int" || word == "long" ||
         word == "float" || word == "double" || word == "void";
}

class UnitParser {
 public:
  explicit UnitParser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  void parse(CompilationUnit& unit) {
    skip_leading_annotations();
    if (is_word("package")) {
      ++pos_;
      unit.package_name = parse_qualified_name();
      expect(TokenKind::Semicolon, "';' after package name");
    }
    while (is_word("import")) {
      ++pos_;
      ImportDecl decl;
      if (is_word("static")) {
        decl.static_import = true;
        ++pos_;
      }
      decl.target = expect_identifier("import target");
      while (is(TokenKind::Dot)) {
        ++pos_;
        if (is(TokenKind::Operator) && peek().text == "*") {
          ++pos_;
          decl.wildcard = true;
          break;
        }
        decl.target += "." + expect_identifier("import target");
      }
      expect(TokenKind::Semicolon, "';' after import");
      unit.imports.push_back(std::move(decl));
    }
    if (is_module_declaration()) return;
    while (!at_end()) {
      if (is(TokenKind::Semicolon)) {
        ++pos_;
        continue;
      }
      const Modifiers mods = parse_modifiers();
      if (!at_type_keyword()) error("expected a type declaration");
      parse_type_decl(mods, unit.package_name, nullptr, unit.types);
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    static const Token eof{TokenKind::Operator, "<eof>", 0};
    const std::size_t k = pos_ + ahead;
    return k < tokens_.size() ? tokens_[k] : eof;
  }
  bool at_end() const { return pos_ >= tokens_.size(); }
  bool is(TokenKind kind, std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() && peek(ahead).kind == kind;
  }
  bool is_word(std::string_view word, std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() &&
           (peek(ahead).kind == TokenKind::Identifier ||
            peek(ahead).kind == TokenKind::Keyword) &&
           peek(ahead).text == word;
  }
  std::size_t line() const {
    if (!at_end()) return peek().line;
    return tokens_.empty() ? 0 : tokens_.back().line;
  }

  [[noreturn]] void error(const std::string& what) const {
    const std::string found =
        at_end() ? std::string("end of file") : "'" + peek().text + "'";
    throw ParseError(line(), what + ", found " + found);
  }

  void expect(TokenKind kind, const char* what) {
    if (!is(kind)) error(std::string("expected ") + what);
    ++pos_;
  }

  std::string expect_identifier(const char* what) {
    if (!is(TokenKind::Identifier)) error(std::string("expected ") + what);
    return tokens_[pos_++].text;
  }

  // Current token opens a delimiter pair; consume through its partner.
  void skip_balanced(TokenKind open, TokenKind close) {
    const std::size_t start_line = line();
    int depth = 0;
    while (!at_end()) {
      const TokenKind k = peek().kind;
      ++pos_;
      if (k == open) {
        ++depth;
      } else if (k == close) {
        if (--depth == 0) return;
      }
    }
    throw ParseError(start_line, "unbalanced delimiter");
  }

  void skip_type_arguments() { skip_balanced(TokenKind::Less, TokenKind::Greater); }

  void skip_annotation() {
    ++pos_;  // '@'
    parse_qualified_name();
    if (is(TokenKind::LParen)) skip_balanced(TokenKind::LParen, TokenKind::RParen);
  }

  bool at_annotation() const {
    return is(TokenKind::At) && !is_word("interface", 1);
  }

  void skip_annotations() {
    while (at_annotation()) skip_annotation();
  }

  void skip_leading_annotations() {
    // package-info.java style: annotations before the package clause.
    while (at_annotation() && !annotation_starts_type()) skip_annotation();
  }

  bool annotation_starts_type() const {
    // Heuristic: leading annotations followed by modifiers and a type
    // keyword belong to the type declaration, which parse_modifiers handles.
    std::size_t k = pos_;
    while (k < tokens_.size()) {
      const Token& t = tokens_[k];
      if (t.text == "package" || t.text == "import") return false;
      if (t.text == "class" || t.text == "interface" || t.text == "enum" ||
          t.text == "record")
        return true;
      ++k;
    }
    return false;
  }

  bool is_module_declaration() const {
    return (is_word("module") && is(TokenKind::Identifier, 1)) ||
           (is_word("open") && is_word("module", 1));
  }

  std::string parse_qualified_name() {
    std::string name = expect_identifier("identifier");
    while (is(TokenKind::Dot) && is(TokenKind::Identifier, 1)) {
      name += "." + tokens_[pos_ + 1].text;
      pos_ += 2;
    }
    return name;
  }

  // Type as written with type arguments and annotations erased.
  std::string parse_type() {
    skip_annotations();
    std::string name;
    if (is(TokenKind::Keyword) && is_primitive(peek().text)) {
      name = tokens_[pos_++].text;
    } else {
      name = expect_identifier("type name");
      if (is(TokenKind::Less)) skip_type_arguments();
      while (is(TokenKind::Dot)) {
        ++pos_;
        skip_annotations();
        name += "." + expect_identifier("type name");
        if (is(TokenKind::Less)) skip_type_arguments();
      }
    }
    append_dims(name);
    return name;
  }

  void append_dims(std::string& name) {
    for (;;) {
      skip_annotations();
      if (is(TokenKind::LBracket) && is(TokenKind::RBracket, 1)) {
        name += "[]";
        pos_ += 2;
      } else {
        return;
      }
    }
  }

  std::vector<std::string> parse_type_list() {
    std::vector<std::string> names{parse_type()};
    while (is(TokenKind::Comma)) {
      ++pos_;
      names.push_back(parse_type());
    }
    return names;
  }

  std::vector<std::string> parse_type_parameters() {
    std::vector<std::string> names;
    const std::size_t open = pos_;
    int depth = 0;
    while (!at_end()) {
      const Token& t = peek();
      if (t.kind == TokenKind::Less) {
        ++depth;
      } else if (t.kind == TokenKind::Greater) {
        if (--depth == 0) {
          ++pos_;
          return names;
        }
      } else if (depth == 1 && t.kind == TokenKind::Identifier) {
        const TokenKind prev = tokens_[pos_ - 1].kind;
        if (prev == TokenKind::Less || prev == TokenKind::Comma) names.push_back(t.text);
      }
      ++pos_;
    }
    throw ParseError(tokens_[open].line, "unbalanced type parameter list");
  }

  Modifiers parse_modifiers() {
    Modifiers mods;
    for (;;) {
      if (at_annotation()) {
        skip_annotation();
        continue;
      }
      if (is(TokenKind::Keyword)) {
        const std::string& w = peek().text;
        if (w == "public") mods.is_public = true;
        else if (w == "private") mods.is_private = true;
        else if (w == "static") mods.is_static = true;
        else if (w == "abstract") mods.is_abstract = true;
        else if (w == "default") mods.is_default = true;
        else if (w != "protected" && w != "final" && w != "native" &&
                 w != "synchronized" && w != "transient" && w != "volatile" &&
                 w != "strictfp")
          return mods;
        ++pos_;
        continue;
      }
      if (is_word("sealed") && !is(TokenKind::LParen, 1)) {
        ++pos_;
        continue;
      }
      if (is_word("non") && is(TokenKind::Operator, 1) && peek(1).text == "-" &&
          is_word("sealed", 2)) {
        pos_ += 3;
        continue;
      }
      return mods;
    }
  }

  bool at_type_keyword() const {
    if (is_word("class") || is_word("interface") || is_word("enum")) return true;
    if (is(TokenKind::At) && is_word("interface", 1)) return true;
    return is_word("record") && is(TokenKind::Identifier, 1) &&
           (is(TokenKind::LParen, 2) || is(TokenKind::Less, 2));
  }

  void parse_type_decl(const Modifiers& mods, const std::string& package,
                       const TypeDecl* outer, std::vector<TypeDecl>& out) {
    TypeDecl decl;
    decl.line = line();
    bool is_record = false;
    if (is_word("class")) {
      decl.kind = TypeKind::Class;
    } else if (is_word("interface")) {
      decl.kind = TypeKind::Interface;
    } else if (is_word("enum")) {
      decl.kind = TypeKind::Enum;
    } else if (is_word("record")) {
      decl.kind = TypeKind::Class;
      is_record = true;
    } else {
      decl.kind = TypeKind::Annotation;
      ++pos_;  // '@'
    }
    ++pos_;
    decl.simple_name = expect_identifier("type name");
    if (outer != nullptr) {
      decl.enclosing_name = outer->qualified_name;
      decl.qualified_name = outer->qualified_name + "." + decl.simple_name;
    } else {
      decl.qualified_name =
          package.empty() ? decl.simple_name : package + "." + decl.simple_name;
    }
    decl.is_abstract = mods.is_abstract || decl.kind == TypeKind::Interface ||
                       decl.kind == TypeKind::Annotation;

    if (is(TokenKind::Less)) decl.type_parameter_names = parse_type_parameters();
    if (is_record) {
      if (!is(TokenKind::LParen)) error("expected record header");
      skip_balanced(TokenKind::LParen, TokenKind::RParen);
    }
    for (;;) {
      if (is_word("extends")) {
        ++pos_;
        auto names = parse_type_list();
        if (decl.kind != TypeKind::Interface && names.size() > 1)
          throw ParseError(decl.line, "class '" + decl.qualified_name +
                                          "' extends more than one type");
        decl.extends_names.insert(decl.extends_names.end(), names.begin(),
                                  names.end());
      } else if (is_word("implements")) {
        ++pos_;
        auto names = parse_type_list();
        if (decl.kind == TypeKind::Interface || decl.kind == TypeKind::Annotation)
          throw ParseError(decl.line, "interface '" + decl.qualified_name +
                                          "' has an implements clause");
        decl.implements_names.insert(decl.implements_names.end(), names.begin(),
                                     names.end());
      } else if (is_word("permits")) {
        ++pos_;
        parse_type_list();
      } else {
        break;
      }
    }
    if (!is(TokenKind::LBrace)) error("expected '{' to open type body");
    ++pos_;

    const std::size_t slot = out.size();
    out.push_back(decl);
    std::vector<TypeDecl> nested;
    parse_body(decl, nested);
    out[slot] = std::move(decl);
    for (auto& n : nested) out.push_back(std::move(n));
  }

  void skip_enum_constants() {
    for (;;) {
      if (at_end()) error("expected '}' to close enum body");
      if (is(TokenKind::Semicolon)) {
        ++pos_;
        return;
      }
      if (is(TokenKind::RBrace)) return;
      if (is(TokenKind::Comma)) {
        ++pos_;
        continue;
      }
      skip_annotations();
      expect_identifier("enum constant");
      if (is(TokenKind::LParen)) skip_balanced(TokenKind::LParen, TokenKind::RParen);
      if (is(TokenKind::LBrace)) skip_balanced(TokenKind::LBrace, TokenKind::RBrace);
    }
  }

  // Consume through the ';' ending a field declaration, stepping over any
  // initializer that contains nested delimiters.
  void skip_to_semicolon() {
    int depth = 0;
    while (!at_end()) {
      const TokenKind k = peek().kind;
      if (depth == 0 && k == TokenKind::Semicolon) {
        ++pos_;
        return;
      }
      if (depth == 0 && k == TokenKind::RBrace) error("expected ';'");
      if (k == TokenKind::LBrace || k == TokenKind::LParen || k == TokenKind::LBracket)
        ++depth;
      else if (k == TokenKind::RBrace || k == TokenKind::RParen ||
               k == TokenKind::RBracket)
        --depth;
      ++pos_;
    }
    error("expected ';'");
  }

  void parse_body(TypeDecl& decl, std::vector<TypeDecl>& nested) {
    const bool interface_like =
        decl.kind == TypeKind::Interface || decl.kind == TypeKind::Annotation;
    if (decl.kind == TypeKind::Enum) skip_enum_constants();
    for (;;) {
      if (at_end()) error("expected '}' to close body of '" + decl.qualified_name + "'");
      if (is(TokenKind::RBrace)) {
        ++pos_;
        return;
      }
      if (is(TokenKind::Semicolon)) {
        ++pos_;
        continue;
      }
      const Modifiers mods = parse_modifiers();
      if (is(TokenKind::LBrace)) {
        skip_balanced(TokenKind::LBrace, TokenKind::RBrace);  // initializer block
        continue;
      }
      if (at_type_keyword()) {
        parse_type_decl(mods, {}, &decl, nested);
        continue;
      }
      parse_member(decl, mods, interface_like);
    }
  }

  void parse_member(TypeDecl& decl, const Modifiers& mods, bool interface_like) {
    if (is(TokenKind::Less)) parse_type_parameters();  // generic method

    RawMethod method;
    if (is(TokenKind::Identifier) && peek().text == decl.simple_name &&
        (is(TokenKind::LParen, 1) || is(TokenKind::LBrace, 1))) {
      method.name = tokens_[pos_++].text;
      method.is_constructor = true;
      if (is(TokenKind::LBrace)) {  // compact record constructor
        skip_balanced(TokenKind::LBrace, TokenKind::RBrace);
        return;
      }
    } else {
      parse_type();
      const std::string name = expect_identifier("member name");
      if (!is(TokenKind::LParen)) {
        skip_to_semicolon();  // field
        return;
      }
      method.name = name;
    }

    method.parameter_type_names = parse_parameters();
    std::string ignored;
    append_dims(ignored);  // legacy `int f()[]`
    if (is_word("throws")) {
      ++pos_;
      parse_type_list();
    }
    if (is_word("default")) {  // annotation element default value
      ++pos_;
      skip_to_semicolon();
    } else if (is(TokenKind::LBrace)) {
      skip_balanced(TokenKind::LBrace, TokenKind::RBrace);
    } else {
      expect(TokenKind::Semicolon, "method body or ';'");
    }

    method.is_static = mods.is_static;
    method.is_default = mods.is_default;
    method.is_public = interface_like ? !mods.is_private : mods.is_public;
    decl.methods.push_back(std::move(method));
  }

  std::vector<std::string> parse_parameters() {
    expect(TokenKind::LParen, "'('");
    std::vector<std::string> types;
    if (is(TokenKind::RParen)) {
      ++pos_;
      return types;
    }
    for (;;) {
      parse_modifiers();  // annotations and `final`
      std::string type = parse_type();
      if (is(TokenKind::Ellipsis)) {
        ++pos_;
        type += "[]";
      }
      skip_annotations();
      bool receiver = false;
      if (is_word("this")) {
        receiver = true;
        ++pos_;
      } else {
        expect_identifier("parameter name");
        if (is(TokenKind::Dot) && is_word("this", 1)) {  // Outer.this receiver
          receiver = true;
          pos_ += 2;
        }
      }
      append_dims(type);
      if (!receiver) types.push_back(std::move(type));
      if (is(TokenKind::Comma)) {
        ++pos_;
        continue;
      }
      expect(TokenKind::RParen, "')' or ','");
      return types;
    }
  }

  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Counts '{' and '}' tokens; literals and comments never produce them.
inline bool braces_balanced(const std::vector<Token>& tokens) {
  long depth = 0;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::LBrace) ++depth;
    if (t.kind == TokenKind::RBrace && --depth < 0) return false;
  }
  return depth == 0;
}

/// Parses one source file down to its type declarations. Any failure yields
/// an empty unit carrying the diagnostic; the caller's run continues.
inline CompilationUnit parse_unit(std::string_view source_text,
                                  std::string file_path) {
  CompilationUnit unit;
  unit.file_path = std::move(file_path);
  TokenStream stream = tokenize(source_text);
  for (auto& d : stream.diagnostics) {
    d.path = unit.file_path;
    unit.diagnostics.push_back(std::move(d));
  }
  auto fail = [&](std::size_t line, std::string message) {
    CompilationUnit empty;
    empty.file_path = unit.file_path;
    empty.diagnostics = std::move(unit.diagnostics);
    empty.diagnostics.push_back(Diagnostic{DiagnosticKind::Parse, empty.file_path,
                                           line, std::move(message)});
    return empty;
  };
  if (stream.truncated) return fail(0, "file skipped: token stream truncated");
  if (!braces_balanced(stream.tokens)) return fail(0, "unbalanced braces");

  try {
    detail::UnitParser(stream.tokens).parse(unit);
  } catch (const detail::ParseError& e) {
    return fail(e.line, e.what());
  }

  std::set<std::string> seen;
  std::vector<TypeDecl> unique;
  for (auto& t : unit.types) {
    if (!seen.insert(t.qualified_name).second) {
      unit.diagnostics.push_back(Diagnostic{DiagnosticKind::Parse, unit.file_path,
                                            t.line,
                                            "duplicate type '" + t.qualified_name +
                                                "' in one file; first kept"});
      continue;
    }
    unique.push_back(std::move(t));
  }
  unit.types = std::move(unique);
  return unit;
}

}  // namespace iface_lens::java
