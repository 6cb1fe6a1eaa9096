#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "iface_lens/cli.hpp"

int main(int argc, char** argv) {
  using namespace iface_lens;

  CLI::App app{"iface_lens: type variability and type completeness of Java interfaces"};
  app.set_version_flag("--version", std::string(kToolVersion));

  RunOptions options;
  std::vector<std::string> roots;
  std::string out_path;
  bool print_config = false;
  bool include_synthetic = true;
  bool no_default_excludes = false;
  unsigned jobs = 0;

  app.add_option("--src", roots, "Source root directory (repeatable)")->required();
  app.add_option("--include", options.analysis.corpus.include_globs,
                 "Include glob relative to a source root (repeatable; default **/*.java)");
  app.add_option("--exclude", options.analysis.corpus.exclude_globs,
                 "Exclude glob relative to a source root (repeatable)");
  app.add_flag("--no-default-excludes", no_default_excludes,
               "Do not exclude **/target/** and **/build/** by default");
  app.add_flag("--follow-symlinks", options.analysis.corpus.follow_symlinks,
               "Follow symbolic links while walking source roots");
  app.add_option("--max-file-bytes", options.analysis.corpus.max_file_bytes,
                 "Skip (with a diagnostic) files larger than this")
      ->capture_default_str();
  app.add_option("--format", options.format, "Report format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, ReportFormat>{{"json", ReportFormat::Json},
                                              {"csv", ReportFormat::Csv}},
          CLI::ignore_case));
  app.add_option("--out", out_path,
                 "Output file (json) or directory (csv); standard output when omitted");
  app.add_option("--ic-mode", options.analysis.ic_mode, "Implementing-class semantics")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, IcMode>{{"transitive", IcMode::Transitive},
                                        {"direct", IcMode::Direct}},
          CLI::ignore_case));
  app.add_flag("--include-synthetic-kinds,!--exclude-synthetic-kinds", include_synthetic,
               "Count enums as classes and annotation types as interfaces (default on)");
  app.add_flag("--fail-on-parse-errors", options.fail_on_parse_errors,
               "Exit with status 2 when any file fails to parse");
  app.add_flag("--emit-diagnostics", options.emit_diagnostics,
               "Also print diagnostics on standard error");
  app.add_option("--jobs", jobs, "Parser threads (default: IFACE_LENS_JOBS or CPU count)");
  app.add_flag("--print-config", print_config, "Print the effective configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitFatal;
  }

  for (const auto& r : roots) options.analysis.corpus.source_roots.emplace_back(r);
  options.analysis.corpus.exclude_generated_dirs = !no_default_excludes;
  options.analysis.include_enums_annotations = include_synthetic;
  options.analysis.jobs = jobs;
  if (!out_path.empty() && out_path != "-") options.output_path = out_path;

  try {
    for (const auto& g : options.analysis.corpus.include_globs) Glob{g};
    for (const auto& g : options.analysis.corpus.exclude_globs) Glob{g};
  } catch (const ConfigError& e) {
    std::cerr << "iface_lens: " << e.what() << "\n";
    return kExitFatal;
  }

  if (print_config) {
    std::cout << effective_config(options).dump(2) << "\n";
    return kExitOk;
  }
  return run(options);
}
