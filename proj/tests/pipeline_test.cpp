#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <string>

#include "iface_lens/cli.hpp"
#include "support/temp_dir.hpp"

using namespace iface_lens;

namespace {

std::string fixture(const std::string& name) {
  return std::string(IFACE_LENS_FIXTURES_DIR) + "/" + name;
}

RunOptions options_for(const std::string& root) {
  RunOptions o;
  o.analysis.corpus.source_roots = {root};
  o.analysis.jobs = 1;
  return o;
}

}  // namespace

TEST(Run, WritesJsonToStream) {
  std::ostringstream out, err;
  EXPECT_EQ(run(options_for(fixture("F3")), out, err), kExitOk);
  const auto b = parse_json_report(out.str());
  EXPECT_EQ(b.summary.interface_count, 2u);
  EXPECT_EQ(b.summary.class_count, 4u);
  EXPECT_EQ(b.summary.implementation_count, 3u);
  EXPECT_EQ(b.summary.file_count, 6u);
  EXPECT_EQ(b.config_echo.at("ic_mode"), "transitive");
  EXPECT_TRUE(err.str().empty()) << err.str();
}

TEST(Run, MissingRootIsFatal) {
  std::ostringstream out, err;
  EXPECT_EQ(run(options_for(fixture("does-not-exist")), out, err), kExitFatal);
  EXPECT_TRUE(out.str().empty());
  EXPECT_NE(err.str().find("does-not-exist"), std::string::npos);
}

TEST(Run, ParseErrorsExitCodeDependsOnFlag) {
  auto o = options_for(fixture("malformed"));
  std::ostringstream out, err;
  EXPECT_EQ(run(o, out, err), kExitOk);
  const auto b = parse_json_report(out.str());
  ASSERT_EQ(b.diagnostics.size(), 1u);
  EXPECT_EQ(b.diagnostics[0].kind, DiagnosticKind::Parse);
  EXPECT_EQ(b.diagnostics[0].line, 4u);
  // The good files are still analysed.
  EXPECT_EQ(b.summary.interface_count, 1u);

  o.fail_on_parse_errors = true;
  std::ostringstream out2, err2;
  EXPECT_EQ(run(o, out2, err2), kExitParseErrors);
  EXPECT_EQ(out2.str(), out.str());
}

TEST(Run, EmitDiagnosticsToErrorStream) {
  auto o = options_for(fixture("malformed"));
  o.emit_diagnostics = true;
  std::ostringstream out, err;
  run(o, out, err);
  EXPECT_NE(err.str().find("parse: "), std::string::npos) << err.str();
  EXPECT_NE(err.str().find("Bad.java:4"), std::string::npos) << err.str();
}

TEST(Run, CsvDirectoryOutput) {
  iface_lens::testing::TempDir t;
  auto o = options_for(fixture("F3"));
  o.format = ReportFormat::Csv;
  o.output_path = t.path() / "out";
  std::ostringstream out, err;
  ASSERT_EQ(run(o, out, err), kExitOk);
  EXPECT_TRUE(out.str().empty());
  const auto metrics = iface_lens::testing::slurp(t.path() / "out" / "metrics.csv");
  EXPECT_NE(metrics.find("f3.J,1,3,1,NULL,0.7500,SEMI_COMPLETE,0"), std::string::npos)
      << metrics;
}

TEST(Run, UnwritableOutputIsFatal) {
  iface_lens::testing::TempDir t;
  const auto blocker = t.write("f", "");
  auto o = options_for(fixture("F3"));
  o.output_path = blocker / "r.json";
  std::ostringstream out, err;
  EXPECT_EQ(run(o, out, err), kExitFatal);
}

TEST(Run, DirectModeAddsDirectCount) {
  auto o = options_for(fixture("F3"));
  o.analysis.ic_mode = IcMode::Direct;
  std::ostringstream out, err;
  ASSERT_EQ(run(o, out, err), kExitOk);
  const auto b = parse_json_report(out.str());
  EXPECT_EQ(b.summary.direct_implementation_count, 2u);
  EXPECT_EQ(b.rows[0].implementer_count, 1u);
}

TEST(EffectiveConfig, EchoesEveryOption) {
  auto o = options_for("src");
  o.analysis.ic_mode = IcMode::Direct;
  o.format = ReportFormat::Csv;
  const auto j = effective_config(o);
  EXPECT_EQ(j.at("source_roots"), nlohmann::ordered_json::array({"src"}));
  EXPECT_EQ(j.at("ic_mode"), "direct");
  EXPECT_EQ(j.at("format"), "csv");
  EXPECT_EQ(j.at("output"), "-");
  EXPECT_EQ(j.at("jobs"), 1);
  EXPECT_EQ(j.at("include_globs"), nlohmann::ordered_json::array({"**/*.java"}));
}

TEST(Analyze, DiscoveryOrderAndJobsDoNotChangeOutput) {
  AnalysisOptions o;
  o.corpus.source_roots = {fixture("F2")};
  o.jobs = 1;
  auto found = discover(o.corpus);
  const auto reference =
      serialize_json(analyze_files(found.files, found.diagnostics, o).bundle);

  std::mt19937 rng(7);
  for (unsigned jobs : {1u, 2u, 4u}) {
    auto files = found.files;
    std::shuffle(files.begin(), files.end(), rng);
    auto diags = found.diagnostics;
    std::shuffle(diags.begin(), diags.end(), rng);
    o.jobs = jobs;
    EXPECT_EQ(serialize_json(analyze_files(files, diags, o).bundle), reference) << jobs;
  }
}

TEST(ParseFiles, UnreadableFileBecomesIoDiagnostic) {
  const std::vector<SourceFile> files = {{"gone.java", "/nonexistent/gone.java"}};
  const auto units = parse_files(files, 2);
  ASSERT_EQ(units.size(), 1u);
  ASSERT_EQ(units[0].diagnostics.size(), 1u);
  EXPECT_EQ(units[0].diagnostics[0].kind, DiagnosticKind::Io);
}
