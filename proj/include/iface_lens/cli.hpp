#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>

#include "iface_lens/pipeline.hpp"
#include "iface_lens/report.hpp"

namespace iface_lens {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitParseErrors = 2;

struct RunOptions {
  AnalysisOptions analysis;
  std::optional<std::filesystem::path> output_path;  // empty: standard output
  ReportFormat format = ReportFormat::Json;
  bool emit_diagnostics = false;  // also print diagnostics on the error stream
  bool fail_on_parse_errors = false;
};

/// The effective configuration, as printed by --print-config.
inline nlohmann::ordered_json effective_config(const RunOptions& options) {
  nlohmann::ordered_json j = config_echo(options.analysis);
  j["format"] = options.format == ReportFormat::Json ? "json" : "csv";
  j["output"] = options.output_path ? options.output_path->generic_string() : "-";
  j["fail_on_parse_errors"] = options.fail_on_parse_errors;
  j["emit_diagnostics"] = options.emit_diagnostics;
  j["jobs"] = options.analysis.jobs != 0 ? options.analysis.jobs : default_jobs();
  return j;
}

/// Exit codes: 0 report written, 1 fatal configuration or I/O error,
/// 2 report written but some files failed to parse and
/// fail_on_parse_errors is set.
inline int run(const RunOptions& options, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  AnalysisResult result;
  try {
    result = analyze(options.analysis);
  } catch (const ConfigError& e) {
    err << "iface_lens: " << e.what() << "\n";
    return kExitFatal;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "iface_lens: " << e.what() << "\n";
    return kExitFatal;
  }

  if (options.emit_diagnostics) {
    for (const auto& d : result.bundle.diagnostics) {
      err << to_string(d.kind) << ": " << (d.path.empty() ? "<corpus>" : d.path);
      if (d.line != 0) err << ":" << d.line;
      err << ": " << d.message << "\n";
    }
  }

  try {
    if (options.output_path) {
      write_report(result.bundle, options.format, *options.output_path);
    } else {
      out << serialize(result.bundle, options.format);
      out.flush();
    }
  } catch (const ReportIoError& e) {
    err << "iface_lens: " << e.what() << "\n";
    return kExitFatal;
  }

  if (result.files_with_parse_errors != 0) {
    err << "iface_lens: " << result.files_with_parse_errors
        << " file(s) had parse errors; see diagnostics in the report\n";
    if (options.fail_on_parse_errors) return kExitParseErrors;
  }
  return kExitOk;
}

}  // namespace iface_lens
