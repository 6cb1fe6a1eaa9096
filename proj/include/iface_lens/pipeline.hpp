#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "iface_lens/corpus_io.hpp"
#include "iface_lens/java_parser.hpp"
#include "iface_lens/metrics.hpp"
#include "iface_lens/report.hpp"
#include "iface_lens/type_graph.hpp"

namespace iface_lens {

inline const char* to_string(IcMode mode) {
  return mode == IcMode::Transitive ? "transitive" : "direct";
}

struct AnalysisOptions {
  CorpusConfig corpus;
  IcMode ic_mode = IcMode::Transitive;
  bool include_enums_annotations = true;
  unsigned jobs = 0;  // 0: IFACE_LENS_JOBS, else hardware concurrency
};

struct AnalysisResult {
  ReportBundle bundle;
  std::size_t files_with_parse_errors = 0;
};

/// Worker budget: IFACE_LENS_JOBS when it holds a positive integer, otherwise
/// the number of hardware threads.
inline unsigned default_jobs() {
  if (const char* env = std::getenv("IFACE_LENS_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Reads and parses files on up to `jobs` threads. Output order follows the
/// input order regardless of scheduling; unreadable files become Io
/// diagnostics on an empty unit.
inline std::vector<CompilationUnit> parse_files(const std::vector<SourceFile>& files,
                                                unsigned jobs) {
  std::vector<CompilationUnit> units(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < files.size(); k = next++) {
      const auto& f = files[k];
      if (auto bytes = read_file(f.canonical)) {
        units[k] = java::parse_unit(*bytes, f.path);
      } else {
        units[k].file_path = f.path;
        units[k].diagnostics.push_back(
            {DiagnosticKind::Io, f.path, 0, "file skipped: cannot read"});
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(files.size())));
  if (n == 1) {
    worker();
    return units;
  }
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return units;
}

inline nlohmann::ordered_json config_echo(const AnalysisOptions& options) {
  nlohmann::ordered_json j;
  auto roots = nlohmann::ordered_json::array();
  for (const auto& r : options.corpus.source_roots) roots.push_back(r.generic_string());
  j["source_roots"] = roots;
  j["include_globs"] = options.corpus.include_globs;
  j["exclude_globs"] = options.corpus.exclude_globs;
  j["exclude_generated_dirs"] = options.corpus.exclude_generated_dirs;
  j["follow_symlinks"] = options.corpus.follow_symlinks;
  j["max_file_bytes"] = options.corpus.max_file_bytes;
  j["ic_mode"] = to_string(options.ic_mode);
  j["include_enums_annotations"] = options.include_enums_annotations;
  return j;
}

/// Everything after discovery. `files` may arrive in any order.
inline AnalysisResult analyze_files(std::vector<SourceFile> files,
                                    Diagnostics diagnostics,
                                    const AnalysisOptions& options) {
  std::sort(files.begin(), files.end(),
            [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
  const unsigned jobs = options.jobs != 0 ? options.jobs : default_jobs();
  std::vector<CompilationUnit> units = parse_files(files, jobs);

  AnalysisResult result;
  for (auto& u : units) {
    bool parse_error = false;
    for (auto& d : u.diagnostics) {
      parse_error = parse_error || d.kind == DiagnosticKind::Parse;
      diagnostics.push_back(std::move(d));
    }
    u.diagnostics.clear();
    result.files_with_parse_errors += parse_error;
  }

  const TypeGraph graph =
      build_type_graph(std::move(units), GraphOptions{options.include_enums_annotations});
  diagnostics.insert(diagnostics.end(), graph.diagnostics().begin(), graph.diagnostics().end());

  result.bundle = make_bundle(graph, compute_all(graph, options.ic_mode), std::move(diagnostics),
                              files.size(), options.ic_mode == IcMode::Direct);
  result.bundle.config_echo = config_echo(options);
  return result;
}

/// Discovery through report bundle. Throws ConfigError on a bad configuration.
inline AnalysisResult analyze(const AnalysisOptions& options) {
  Discovery found = discover(options.corpus);
  return analyze_files(std::move(found.files), std::move(found.diagnostics), options);
}

}  // namespace iface_lens
