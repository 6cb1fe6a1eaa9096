#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "iface_lens/diagnostic.hpp"

namespace iface_lens::java {

enum class TokenKind {
  Identifier,
  Keyword,
  Literal,  // numeric, string, char and text-block literals; text is elided
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Less,
  Greater,
  Comma,
  Semicolon,
  Dot,
  Ellipsis,
  At,
  Question,
  Operator,  // any other punctuation, one character per token
};

struct Token {
  TokenKind kind = TokenKind::Operator;
  std::string text;
  std::size_t line = 1;

  friend bool operator==(const Token&, const Token&) = default;
};

struct TokenStream {
  std::vector<Token> tokens;
  Diagnostics diagnostics;
  bool truncated = false;  // an unterminated comment or literal ended the scan
};

namespace detail {

inline constexpr std::array<std::string_view, 51> kKeywords = {
    "abstract",   "assert",       "boolean",   "break",      "byte",
    "case",       "catch",        "char",      "class",      "const",
    "continue",   "default",      "do",        "double",     "else",
    "enum",       "extends",      "final",     "finally",    "float",
    "for",        "goto",         "if",        "implements", "import",
    "instanceof", "int",          "interface", "long",       "native",
    "new",        "package",      "private",   "protected",  "public",
    "return",     "short",        "static",    "strictfp",   "super",
    "switch",     "synchronized", "this",      "throw",      "throws",
    "transient",  "try",          "void",      "volatile",   "while",
    "_"};

inline bool is_keyword(std::string_view word) {
  for (auto kw : kKeywords) {
    if (kw == word) return true;
  }
  return false;
}

// Bytes >= 0x80 belong to non-ASCII identifier characters once the input
// has been sanitized to valid UTF-8.
inline bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c == '$' || c >= 0x80;
}

inline bool is_ident_part(unsigned char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}

inline bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

}  // namespace detail

/// Replaces every invalid UTF-8 sequence with U+FFFD.
inline std::string sanitize_utf8(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  const auto* s = reinterpret_cast<const unsigned char*>(in.data());
  const std::size_t n = in.size();
  std::size_t i = 0;
  while (i < n) {
    const unsigned char c = s[i];
    std::size_t len = 0;
    std::uint32_t min = 0;
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      min = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      min = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      min = 0x10000;
    }
    bool ok = len != 0 && i + len <= n;
    std::uint32_t cp = 0;
    if (ok) {
      cp = c & (0xFF >> (len + 1));
      for (std::size_t k = 1; k < len; ++k) {
        if ((s[i + k] & 0xC0) != 0x80) {
          ok = false;
          break;
        }
        cp = (cp << 6) | (s[i + k] & 0x3F);
      }
    }
    ok = ok && cp >= min && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
    if (ok) {
      out.append(in.substr(i, len));
      i += len;
    } else {
      out.append("\xEF\xBF\xBD");
      ++i;
    }
  }
  return out;
}

/// Splits Java source into declaration-relevant tokens. Comments vanish;
/// literals become a single opaque Literal token so their content can never
/// act as a delimiter.
inline TokenStream tokenize(std::string_view raw_source) {
  const std::string source = sanitize_utf8(raw_source);
  TokenStream out;
  const std::size_t n = source.size();
  std::size_t i = 0;
  std::size_t line = 1;

  auto at = [&](std::size_t k) -> unsigned char {
    return k < n ? static_cast<unsigned char>(source[k]) : '\0';
  };
  auto push = [&](TokenKind kind, std::string text, std::size_t tok_line) {
    out.tokens.push_back(Token{kind, std::move(text), tok_line});
  };
  auto fail = [&](std::size_t tok_line, std::string message) {
    out.diagnostics.push_back(
        Diagnostic{DiagnosticKind::Parse, {}, tok_line, std::move(message)});
    out.truncated = true;
  };

  while (i < n) {
    const unsigned char c = at(i);
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
      ++i;
      continue;
    }
    if (c == '/' && at(i + 1) == '/') {
      while (i < n && at(i) != '\n') ++i;
      continue;
    }
    if (c == '/' && at(i + 1) == '*') {
      const std::size_t start_line = line;
      i += 2;
      bool closed = false;
      while (i < n) {
        if (at(i) == '*' && at(i + 1) == '/') {
          i += 2;
          closed = true;
          break;
        }
        if (at(i) == '\n') ++line;
        ++i;
      }
      if (!closed) {
        fail(start_line, "unterminated block comment");
        return out;
      }
      continue;
    }
    if (c == '"' && at(i + 1) == '"' && at(i + 2) == '"') {
      const std::size_t start_line = line;
      i += 3;
      bool closed = false;
      while (i < n) {
        if (at(i) == '\\') {
          if (at(i + 1) == '\n') ++line;
          i += 2;
          continue;
        }
        if (at(i) == '"' && at(i + 1) == '"' && at(i + 2) == '"') {
          i += 3;
          closed = true;
          break;
        }
        if (at(i) == '\n') ++line;
        ++i;
      }
      if (!closed) {
        fail(start_line, "unterminated text block");
        return out;
      }
      push(TokenKind::Literal, "\"\"\"", start_line);
      continue;
    }
    if (c == '"' || c == '\'') {
      const unsigned char quote = c;
      const std::size_t start_line = line;
      ++i;
      bool closed = false;
      while (i < n && at(i) != '\n') {
        if (at(i) == '\\') {
          i += 2;
          continue;
        }
        if (at(i) == quote) {
          ++i;
          closed = true;
          break;
        }
        ++i;
      }
      if (!closed) {
        fail(start_line, quote == '"' ? "unterminated string literal"
                                      : "unterminated character literal");
        return out;
      }
      push(TokenKind::Literal, quote == '"' ? "\"\"" : "''", start_line);
      continue;
    }
    if (detail::is_digit(c) || (c == '.' && detail::is_digit(at(i + 1)))) {
      const std::size_t start = i;
      const bool hex = c == '0' && (at(i + 1) == 'x' || at(i + 1) == 'X');
      while (i < n) {
        const unsigned char d = at(i);
        if (detail::is_ident_part(d) || d == '.') {
          const bool exponent =
              hex ? (d == 'p' || d == 'P') : (d == 'e' || d == 'E');
          ++i;
          if (exponent && (at(i) == '+' || at(i) == '-')) ++i;
          continue;
        }
        break;
      }
      push(TokenKind::Literal, source.substr(start, i - start), line);
      continue;
    }
    if (detail::is_ident_start(c)) {
      const std::size_t start = i;
      while (i < n && detail::is_ident_part(at(i))) ++i;
      std::string word = source.substr(start, i - start);
      const bool kw = detail::is_keyword(word);
      push(kw ? TokenKind::Keyword : TokenKind::Identifier, std::move(word),
           line);
      continue;
    }
    if (c == '.' && at(i + 1) == '.' && at(i + 2) == '.') {
      push(TokenKind::Ellipsis, "...", line);
      i += 3;
      continue;
    }
    TokenKind kind = TokenKind::Operator;
    switch (c) {
      case '{': kind = TokenKind::LBrace; break;
      case '}': kind = TokenKind::RBrace; break;
      case '(': kind = TokenKind::LParen; break;
      case ')': kind = TokenKind::RParen; break;
      case '[': kind = TokenKind::LBracket; break;
      case ']': kind = TokenKind::RBracket; break;
      case '<': kind = TokenKind::Less; break;
      case '>': kind = TokenKind::Greater; break;
      case ',': kind = TokenKind::Comma; break;
      case ';': kind = TokenKind::Semicolon; break;
      case '.': kind = TokenKind::Dot; break;
      case '@': kind = TokenKind::At; break;
      case '?': kind = TokenKind::Question; break;
      default: break;
    }
    push(kind, std::string(1, static_cast<char>(c)), line);
    ++i;
  }
  return out;
}

}  // namespace iface_lens::java
