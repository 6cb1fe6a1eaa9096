#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "iface_lens/diagnostic.hpp"

namespace iface_lens {

namespace fs = std::filesystem;

/// Fatal configuration problem (missing root, malformed glob, ...).
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Paths are matched relative to their source root with '/' separators.
// `*` and `?` stay within one segment, `**` spans any number of segments
// (including none), `[abc]`/`[!a-z]` are character classes.
class Glob {
 public:
  explicit Glob(std::string pattern) : pattern_(std::move(pattern)) {
    if (pattern_.empty()) throw ConfigError("empty glob pattern");
    for (std::size_t k = 0; k < pattern_.size(); ++k) {
      if (pattern_[k] == '[') {
        const auto close = pattern_.find(']', k + 2);
        if (close == std::string::npos)
          throw ConfigError("unterminated '[' in glob '" + pattern_ + "'");
        k = close;
      }
    }
  }

  const std::string& pattern() const { return pattern_; }

  bool matches(std::string_view path) const { return match(0, path, 0); }

 private:
  bool match(std::size_t p, std::string_view s, std::size_t i) const {
    while (p < pattern_.size()) {
      const char c = pattern_[p];
      if (c == '*') {
        if (p + 1 < pattern_.size() && pattern_[p + 1] == '*') {
          std::size_t next = p + 2;
          // "**/" also matches zero directories.
          if (next < pattern_.size() && pattern_[next] == '/') {
            if (match(next + 1, s, i)) return true;
          }
          for (std::size_t k = i; k <= s.size(); ++k)
            if (match(next, s, k)) return true;
          return false;
        }
        for (std::size_t k = i; k <= s.size(); ++k) {
          if (match(p + 1, s, k)) return true;
          if (k < s.size() && s[k] == '/') break;
        }
        return false;
      }
      if (i >= s.size()) return false;
      if (c == '?') {
        if (s[i] == '/') return false;
        ++p;
        ++i;
        continue;
      }
      if (c == '[') {
        const std::size_t close = pattern_.find(']', p + 2);
        std::size_t q = p + 1;
        const bool negate = pattern_[q] == '!' || pattern_[q] == '^';
        if (negate) ++q;
        bool hit = false;
        for (; q < close; ++q) {
          if (q + 2 < close && pattern_[q + 1] == '-') {
            hit = hit || (s[i] >= pattern_[q] && s[i] <= pattern_[q + 2]);
            q += 2;
          } else {
            hit = hit || s[i] == pattern_[q];
          }
        }
        if (hit == negate || s[i] == '/') return false;
        p = close + 1;
        ++i;
        continue;
      }
      if (c != s[i]) return false;
      ++p;
      ++i;
    }
    return i == s.size();
  }

  std::string pattern_;
};

inline const std::vector<std::string>& default_generated_excludes() {
  static const std::vector<std::string> globs = {"**/target/**", "**/build/**"};
  return globs;
}

struct CorpusConfig {
  std::vector<fs::path> source_roots;
  std::vector<std::string> include_globs{"**/*.java"};
  std::vector<std::string> exclude_globs;
  bool exclude_generated_dirs = true;  // adds default_generated_excludes()
  bool follow_symlinks = false;
  std::uintmax_t max_file_bytes = 2u * 1024u * 1024u;
};

struct SourceFile {
  std::string path;  // display path: root as given joined with the relative path
  fs::path canonical;

  friend bool operator==(const SourceFile&, const SourceFile&) = default;
};

struct Discovery {
  std::vector<SourceFile> files;  // sorted by path, no duplicates
  Diagnostics diagnostics;
};

/// Walks every root and returns the `.java` files that match an include glob
/// and no exclude glob. Throws ConfigError for a missing root.
inline Discovery discover(const CorpusConfig& config) {
  if (config.source_roots.empty()) throw ConfigError("no source roots configured");
  std::vector<Glob> includes, excludes;
  for (const auto& g : config.include_globs) includes.emplace_back(g);
  for (const auto& g : config.exclude_globs) excludes.emplace_back(g);
  if (config.exclude_generated_dirs)
    for (const auto& g : default_generated_excludes()) excludes.emplace_back(g);

  Discovery out;
  std::map<fs::path, std::string> by_canonical;

  for (const auto& root : config.source_roots) {
    std::error_code ec;
    if (!fs::is_directory(root, ec))
      throw ConfigError("source root does not exist or is not a directory: " + root.string());

    auto options = fs::directory_options::skip_permission_denied;
    if (config.follow_symlinks) options |= fs::directory_options::follow_directory_symlink;
    fs::recursive_directory_iterator it(root, options, ec), end;
    if (ec) throw ConfigError("cannot read source root " + root.string() + ": " + ec.message());

    for (; it != end; it.increment(ec)) {
      if (ec) {
        out.diagnostics.push_back(
            {DiagnosticKind::Io, root.generic_string(), 0, "walk error: " + ec.message()});
        ec.clear();
        continue;
      }
      const fs::directory_entry& entry = *it;
      // Lexical, so a symlink keeps its own name rather than its target's.
      const std::string rel = entry.path().lexically_relative(root).generic_string();
      if (rel.empty()) continue;
      const std::string display = (root / rel).generic_string();
      const bool is_link = entry.is_symlink(ec);
      if (entry.is_directory(ec)) {
        if (is_link && !config.follow_symlinks) {
          out.diagnostics.push_back({DiagnosticKind::Io, display, 0,
                                     "symbolic link to directory not followed"});
          continue;
        }
        // A trailing "/**" exclude that matches the directory excludes
        // everything below it.
        const std::string dir = rel + "/";
        for (const auto& g : excludes) {
          const auto& pat = g.pattern();
          if (pat.size() >= 3 && pat.compare(pat.size() - 3, 3, "/**") == 0 && g.matches(dir)) {
            it.disable_recursion_pending();
            break;
          }
        }
        continue;
      }
      if (rel.size() < 5 || rel.compare(rel.size() - 5, 5, ".java") != 0) continue;
      if (std::none_of(includes.begin(), includes.end(),
                       [&](const Glob& g) { return g.matches(rel); }))
        continue;
      if (std::any_of(excludes.begin(), excludes.end(),
                      [&](const Glob& g) { return g.matches(rel); }))
        continue;
      if (is_link && !config.follow_symlinks) {
        out.diagnostics.push_back(
            {DiagnosticKind::Io, display, 0, "symbolic link skipped (symlinks not followed)"});
        continue;
      }
      if (!entry.is_regular_file(ec)) continue;
      const auto size = entry.file_size(ec);
      if (!ec && size > config.max_file_bytes) {
        out.diagnostics.push_back({DiagnosticKind::Io, display, 0,
                                   "file skipped: " + std::to_string(size) +
                                       " bytes exceeds limit of " +
                                       std::to_string(config.max_file_bytes)});
        continue;
      }
      fs::path canonical = fs::weakly_canonical(entry.path(), ec);
      if (ec) {
        canonical = fs::absolute(entry.path());
        ec.clear();
      }
      auto [pos, inserted] = by_canonical.emplace(canonical, display);
      if (!inserted && display < pos->second) pos->second = display;
    }
  }

  for (const auto& [canonical, display] : by_canonical) out.files.push_back({display, canonical});
  std::sort(out.files.begin(), out.files.end(),
            [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
  std::sort(out.diagnostics.begin(), out.diagnostics.end());
  return out;
}

/// Reads a whole file as bytes, or nullopt on failure.
inline std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return std::move(ss).str();
}

}  // namespace iface_lens
