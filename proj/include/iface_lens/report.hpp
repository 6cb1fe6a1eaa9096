#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "iface_lens/diagnostic.hpp"
#include "iface_lens/metrics.hpp"
#include "iface_lens/type_graph.hpp"

namespace iface_lens {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Axis { Tv, Tc };

struct Histogram {
  Axis axis = Axis::Tv;
  std::vector<std::pair<std::string, std::size_t>> bins;  // fixed order
  std::size_t total = 0;

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

// TC bins without ABSENT (rows) against TV bins without UNIMPLEMENTED (columns).
inline constexpr std::array<TcBin, 4> kGridTcBins = {
    TcBin::Partial, TcBin::SemiPartial, TcBin::SemiComplete, TcBin::Complete};
inline constexpr std::array<TvBin, 6> kGridTvBins = {
    TvBin::Null, TvBin::Tiny, TvBin::Small, TvBin::Medium, TvBin::Large, TvBin::Huge};

struct DensityGrid {
  std::array<std::array<std::size_t, kGridTvBins.size()>, kGridTcBins.size()> cells{};
  std::size_t total = 0;

  std::size_t at(TcBin tc, TvBin tv) const {
    for (std::size_t r = 0; r < kGridTcBins.size(); ++r)
      for (std::size_t c = 0; c < kGridTvBins.size(); ++c)
        if (kGridTcBins[r] == tc && kGridTvBins[c] == tv) return cells[r][c];
    throw std::out_of_range("density grid has no such cell");
  }

  friend bool operator==(const DensityGrid&, const DensityGrid&) = default;
};

struct CorpusSummary {
  std::size_t interface_count = 0;
  std::size_t class_count = 0;
  std::size_t implementation_count = 0;  // transitive, matching IC
  std::optional<std::size_t> direct_implementation_count;
  std::size_t file_count = 0;
  std::size_t diagnostic_count = 0;

  friend bool operator==(const CorpusSummary&, const CorpusSummary&) = default;
};

struct ReportBundle {
  CorpusSummary summary;
  std::vector<InterfaceMetricsRow> rows;
  Histogram tv_histogram{Axis::Tv, {}, 0};
  Histogram tc_histogram{Axis::Tc, {}, 0};
  DensityGrid density_grid;
  Diagnostics diagnostics;
  std::string tool_version{kToolVersion};
  nlohmann::ordered_json config_echo = nlohmann::ordered_json::object();

  friend bool operator==(const ReportBundle&, const ReportBundle&) = default;
};

enum class ReportFormat { Json, Csv };

/// Thrown when a report cannot be written; carries the offending path.
class ReportIoError : public std::runtime_error {
 public:
  ReportIoError(std::filesystem::path path, const std::string& what)
      : std::runtime_error(what + ": " + path.string()), path_(std::move(path)) {}
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::pair<Histogram, Histogram> build_histograms(
    const std::vector<InterfaceMetricsRow>& rows) {
  Histogram tv{Axis::Tv, {}, rows.size()};
  Histogram tc{Axis::Tc, {}, rows.size()};
  for (auto b : kTvBins) {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.tv_bin == b;
    tv.bins.emplace_back(to_string(b), n);
  }
  for (auto b : kTcBins) {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.tc_bin == b;
    tc.bins.emplace_back(to_string(b), n);
  }
  return {std::move(tv), std::move(tc)};
}

inline DensityGrid build_density_grid(const std::vector<InterfaceMetricsRow>& rows) {
  DensityGrid grid;
  for (const auto& row : rows) {
    if (!row.tc || row.tv == 0) continue;
    for (std::size_t r = 0; r < kGridTcBins.size(); ++r)
      for (std::size_t c = 0; c < kGridTvBins.size(); ++c)
        if (kGridTcBins[r] == row.tc_bin && kGridTvBins[c] == row.tv_bin) {
          ++grid.cells[r][c];
          ++grid.total;
        }
  }
  return grid;
}

/// Table-1 style counts. `implementation_count` counts classes implementing
/// at least one corpus interface transitively; the direct-only count is
/// added when requested.
inline CorpusSummary corpus_summary(const TypeGraph& graph,
                                    const std::vector<InterfaceMetricsRow>& rows,
                                    std::size_t file_count = 0,
                                    std::size_t diagnostic_count = 0,
                                    bool include_direct = false) {
  CorpusSummary s;
  s.interface_count = rows.size();
  s.class_count = graph.classes().size();
  std::set<TypeId> transitive, direct;
  for (TypeId i : graph.interfaces()) {
    for (TypeId c : implementing_classes(graph, i, IcMode::Transitive)) transitive.insert(c);
    for (TypeId c : implementing_classes(graph, i, IcMode::Direct)) direct.insert(c);
  }
  s.implementation_count = transitive.size();
  if (include_direct) s.direct_implementation_count = direct.size();
  s.file_count = file_count;
  s.diagnostic_count = diagnostic_count;
  return s;
}

inline ReportBundle make_bundle(const TypeGraph& graph,
                                std::vector<InterfaceMetricsRow> rows,
                                Diagnostics diagnostics, std::size_t file_count,
                                bool include_direct = false) {
  ReportBundle b;
  std::sort(diagnostics.begin(), diagnostics.end());
  b.summary = corpus_summary(graph, rows, file_count, diagnostics.size(), include_direct);
  std::tie(b.tv_histogram, b.tc_histogram) = build_histograms(rows);
  b.density_grid = build_density_grid(rows);
  b.rows = std::move(rows);
  b.diagnostics = std::move(diagnostics);
  return b;
}

namespace detail {

inline std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void histogram_json(std::string& out, const Histogram& h) {
  out += "{\"axis\": ";
  out += h.axis == Axis::Tv ? "\"TV\"" : "\"TC\"";
  out += ", \"bins\": [";
  for (std::size_t k = 0; k < h.bins.size(); ++k) {
    if (k != 0) out += ", ";
    out += "{\"bin\": " + quote(h.bins[k].first) +
           ", \"count\": " + std::to_string(h.bins[k].second) + "}";
  }
  out += "], \"total\": " + std::to_string(h.total) + "}";
}

}  // namespace detail

/// Deterministic JSON: fixed key order, one row per line, decimals with four
/// fraction digits. `tc_exact` keeps the exact ratio for lossless reading.
inline std::string serialize_json(const ReportBundle& b) {
  using detail::quote;
  std::string out = "{\n";
  const auto& s = b.summary;
  out += "  \"summary\": {\"interface_count\": " + std::to_string(s.interface_count) +
         ", \"class_count\": " + std::to_string(s.class_count) +
         ", \"implementation_count\": " + std::to_string(s.implementation_count);
  if (s.direct_implementation_count)
    out += ", \"direct_implementation_count\": " +
           std::to_string(*s.direct_implementation_count);
  out += ", \"file_count\": " + std::to_string(s.file_count) +
         ", \"diagnostic_count\": " + std::to_string(s.diagnostic_count) + "},\n";

  out += "  \"rows\": [";
  for (std::size_t k = 0; k < b.rows.size(); ++k) {
    const auto& r = b.rows[k];
    out += k == 0 ? "\n    " : ",\n    ";
    out += "{\"interface\": " + quote(r.interface_name) +
           ", \"implementer_count\": " + std::to_string(r.implementer_count) +
           ", \"pm_size\": " + std::to_string(r.pm_size) +
           ", \"tv\": " + std::to_string(r.tv) + ", \"tv_bin\": " + quote(to_string(r.tv_bin)) +
           ", \"tc\": " + (r.tc ? format_decimal(*r.tc) : "null") +
           ", \"tc_exact\": " + (r.tc ? quote(format_rational(*r.tc)) : "null") +
           ", \"tc_bin\": " + quote(to_string(r.tc_bin)) +
           ", \"clamp_warnings\": " + std::to_string(r.clamp_warnings) + "}";
  }
  out += b.rows.empty() ? "],\n" : "\n  ],\n";

  out += "  \"tv_histogram\": ";
  detail::histogram_json(out, b.tv_histogram);
  out += ",\n  \"tc_histogram\": ";
  detail::histogram_json(out, b.tc_histogram);

  out += ",\n  \"density_grid\": {\"tc_bins\": [";
  for (std::size_t r = 0; r < kGridTcBins.size(); ++r)
    out += (r ? ", " : "") + quote(to_string(kGridTcBins[r]));
  out += "], \"tv_bins\": [";
  for (std::size_t c = 0; c < kGridTvBins.size(); ++c)
    out += (c ? ", " : "") + quote(to_string(kGridTvBins[c]));
  out += "], \"cells\": [";
  for (std::size_t r = 0; r < kGridTcBins.size(); ++r) {
    out += r ? ", [" : "[";
    for (std::size_t c = 0; c < kGridTvBins.size(); ++c)
      out += (c ? ", " : "") + std::to_string(b.density_grid.cells[r][c]);
    out += "]";
  }
  out += "], \"total\": " + std::to_string(b.density_grid.total) + "},\n";

  out += "  \"diagnostics\": [";
  for (std::size_t k = 0; k < b.diagnostics.size(); ++k) {
    const auto& d = b.diagnostics[k];
    out += k == 0 ? "\n    " : ",\n    ";
    out += "{\"kind\": " + quote(to_string(d.kind)) + ", \"path\": " + quote(d.path) +
           ", \"line\": " + std::to_string(d.line) + ", \"message\": " + quote(d.message) +
           "}";
  }
  out += b.diagnostics.empty() ? "],\n" : "\n  ],\n";

  out += "  \"tool_version\": " + quote(b.tool_version) + ",\n";
  out += "  \"config_echo\": " + b.config_echo.dump() + "\n}\n";
  return out;
}

/// Reads a report produced by serialize_json. Throws std::invalid_argument
/// (or nlohmann::json::exception) on malformed input.
inline ReportBundle parse_json_report(std::string_view text) {
  const auto j = nlohmann::ordered_json::parse(text);
  ReportBundle b;
  const auto& s = j.at("summary");
  b.summary.interface_count = s.at("interface_count").get<std::size_t>();
  b.summary.class_count = s.at("class_count").get<std::size_t>();
  b.summary.implementation_count = s.at("implementation_count").get<std::size_t>();
  if (s.contains("direct_implementation_count"))
    b.summary.direct_implementation_count =
        s.at("direct_implementation_count").get<std::size_t>();
  b.summary.file_count = s.at("file_count").get<std::size_t>();
  b.summary.diagnostic_count = s.at("diagnostic_count").get<std::size_t>();

  for (const auto& r : j.at("rows")) {
    InterfaceMetricsRow row;
    row.interface_name = r.at("interface").get<std::string>();
    row.implementer_count = r.at("implementer_count").get<std::size_t>();
    row.pm_size = r.at("pm_size").get<std::size_t>();
    row.tv = r.at("tv").get<std::size_t>();
    auto tvb = parse_tv_bin(r.at("tv_bin").get<std::string>());
    auto tcb = parse_tc_bin(r.at("tc_bin").get<std::string>());
    if (!tvb || !tcb) throw std::invalid_argument("unknown bin label in row");
    row.tv_bin = *tvb;
    row.tc_bin = *tcb;
    if (!r.at("tc_exact").is_null()) row.tc = parse_rational(r.at("tc_exact").get<std::string>());
    row.clamp_warnings = r.at("clamp_warnings").get<std::size_t>();
    b.rows.push_back(std::move(row));
  }

  auto histogram = [](const nlohmann::ordered_json& h) {
    Histogram out;
    const auto axis = h.at("axis").get<std::string>();
    if (axis != "TV" && axis != "TC") throw std::invalid_argument("unknown axis " + axis);
    out.axis = axis == "TV" ? Axis::Tv : Axis::Tc;
    for (const auto& bin : h.at("bins"))
      out.bins.emplace_back(bin.at("bin").get<std::string>(), bin.at("count").get<std::size_t>());
    out.total = h.at("total").get<std::size_t>();
    return out;
  };
  b.tv_histogram = histogram(j.at("tv_histogram"));
  b.tc_histogram = histogram(j.at("tc_histogram"));

  const auto& grid = j.at("density_grid");
  const auto& cells = grid.at("cells");
  if (cells.size() != kGridTcBins.size()) throw std::invalid_argument("density grid shape");
  for (std::size_t r = 0; r < kGridTcBins.size(); ++r) {
    if (cells[r].size() != kGridTvBins.size()) throw std::invalid_argument("density grid shape");
    for (std::size_t c = 0; c < kGridTvBins.size(); ++c)
      b.density_grid.cells[r][c] = cells[r][c].get<std::size_t>();
  }
  b.density_grid.total = grid.at("total").get<std::size_t>();

  for (const auto& d : j.at("diagnostics")) {
    Diagnostic diag;
    const auto kind = d.at("kind").get<std::string>();
    bool known = false;
    for (auto k : {DiagnosticKind::Io, DiagnosticKind::Parse, DiagnosticKind::Resolve,
                   DiagnosticKind::Cycle})
      if (kind == to_string(k)) {
        diag.kind = k;
        known = true;
      }
    if (!known) throw std::invalid_argument("unknown diagnostic kind " + kind);
    diag.path = d.at("path").get<std::string>();
    diag.line = d.at("line").get<std::size_t>();
    diag.message = d.at("message").get<std::string>();
    b.diagnostics.push_back(std::move(diag));
  }
  b.tool_version = j.at("tool_version").get<std::string>();
  b.config_echo = j.at("config_echo");
  return b;
}

struct CsvTable {
  std::string file_name;
  std::string content;
};

inline constexpr std::string_view kMetricsCsvHeader =
    "interface,implementer_count,pm_size,tv,tv_bin,tc,tc_bin,clamp_warnings";

/// One table per file, each with a fixed header line.
inline std::vector<CsvTable> serialize_csv(const ReportBundle& b) {
  using detail::csv_field;
  std::vector<CsvTable> tables;

  std::string metrics = std::string(kMetricsCsvHeader) + "\n";
  for (const auto& r : b.rows) {
    metrics += csv_field(r.interface_name) + "," + std::to_string(r.implementer_count) + "," +
               std::to_string(r.pm_size) + "," + std::to_string(r.tv) + "," +
               to_string(r.tv_bin) + "," + (r.tc ? format_decimal(*r.tc) : "") + "," +
               to_string(r.tc_bin) + "," + std::to_string(r.clamp_warnings) + "\n";
  }
  tables.push_back({"metrics.csv", std::move(metrics)});

  auto histogram = [](const Histogram& h) {
    std::string out = "bin,count\n";
    for (const auto& [bin, count] : h.bins) out += bin + "," + std::to_string(count) + "\n";
    return out;
  };
  tables.push_back({"tv_histogram.csv", histogram(b.tv_histogram)});
  tables.push_back({"tc_histogram.csv", histogram(b.tc_histogram)});

  std::string grid = "tc_bin";
  for (auto tv : kGridTvBins) grid += std::string(",") + to_string(tv);
  grid += "\n";
  for (std::size_t r = 0; r < kGridTcBins.size(); ++r) {
    grid += to_string(kGridTcBins[r]);
    for (std::size_t c = 0; c < kGridTvBins.size(); ++c)
      grid += "," + std::to_string(b.density_grid.cells[r][c]);
    grid += "\n";
  }
  tables.push_back({"density_grid.csv", std::move(grid)});

  const auto& s = b.summary;
  std::string summary = "metric,value\n";
  summary += "interface_count," + std::to_string(s.interface_count) + "\n";
  summary += "class_count," + std::to_string(s.class_count) + "\n";
  summary += "implementation_count," + std::to_string(s.implementation_count) + "\n";
  if (s.direct_implementation_count)
    summary += "direct_implementation_count," +
               std::to_string(*s.direct_implementation_count) + "\n";
  summary += "file_count," + std::to_string(s.file_count) + "\n";
  summary += "diagnostic_count," + std::to_string(s.diagnostic_count) + "\n";
  tables.push_back({"summary.csv", std::move(summary)});

  std::string diags = "kind,path,line,message\n";
  for (const auto& d : b.diagnostics)
    diags += std::string(to_string(d.kind)) + "," + csv_field(d.path) + "," +
             std::to_string(d.line) + "," + csv_field(d.message) + "\n";
  tables.push_back({"diagnostics.csv", std::move(diags)});
  return tables;
}

/// Whole report as one byte string. CSV tables are concatenated, each
/// preceded by a `# <file name>` line.
inline std::string serialize(const ReportBundle& b, ReportFormat format) {
  if (format == ReportFormat::Json) return serialize_json(b);
  std::string out;
  for (const auto& t : serialize_csv(b)) out += "# " + t.file_name + "\n" + t.content;
  return out;
}

/// JSON goes to `path`; CSV treats `path` as a directory receiving one file
/// per table.
inline void write_report(const ReportBundle& b, ReportFormat format,
                         const std::filesystem::path& path) {
  auto write_file = [](const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw ReportIoError(p, "cannot open report for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw ReportIoError(p, "failed writing report");
  };
  if (format == ReportFormat::Json) {
    write_file(path, serialize_json(b));
    return;
  }
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec || !std::filesystem::is_directory(path))
    throw ReportIoError(path, "cannot create CSV output directory");
  for (const auto& t : serialize_csv(b)) write_file(path / t.file_name, t.content);
}

}  // namespace iface_lens
