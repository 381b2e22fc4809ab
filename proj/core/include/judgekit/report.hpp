#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "judgekit/inference.hpp"
#include "judgekit/pipeline.hpp"
#include "judgekit/ratings.hpp"

namespace judgekit {

inline constexpr int kReportSchemaVersion = 1;

enum class ReportKind { JudgeReport, ComparisonReport, SweepTable, Diagnostics, SkewnessTable };
enum class ColumnFormat { Text, Integer, Coefficient, PValue };
enum class RenderStyle { Tsv, Json, Markdown };

const char* to_string(ReportKind kind);
const char* to_string(ColumnFormat format);
const char* to_string(RenderStyle style);
ReportKind parse_report_kind(const std::string& text);
ColumnFormat parse_column_format(const std::string& text);
RenderStyle parse_render_style(const std::string& text);

struct Column {
  std::string name;
  ColumnFormat format = ColumnFormat::Text;

  bool operator==(const Column&) const = default;
};

struct ReportCell {
  enum class Kind { Text, Number, Undefined };
  Kind kind = Kind::Undefined;
  std::string text;  // Text payload, or the reason for Undefined
  double number = 0.0;

  static ReportCell of_text(std::string s) { return {Kind::Text, std::move(s), 0.0}; }
  static ReportCell of_number(double v) { return {Kind::Number, {}, v}; }
  static ReportCell undefined(std::string reason) { return {Kind::Undefined, std::move(reason), 0.0}; }
  static ReportCell of_metric(const MetricValue& v);

  bool operator==(const ReportCell&) const = default;
};

struct ReportRow {
  std::vector<ReportCell> cells;
  std::vector<bool> best;  // empty, or one flag per column

  bool operator==(const ReportRow&) const = default;
};

struct ReportMetadata {
  std::string toolkit_version;
  std::map<std::string, std::string> input_digests;  // input name -> sha256
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::string>> decisions;

  bool operator==(const ReportMetadata&) const = default;
};

struct ReportDocument {
  ReportKind kind = ReportKind::Diagnostics;
  std::vector<Column> columns;
  std::vector<ReportRow> rows;
  ReportMetadata metadata;

  bool operator==(const ReportDocument&) const = default;
};

// Coefficients print with 4 decimals; p-values below 1e-4 switch to
// scientific notation.
std::string format_cell(const ReportCell& cell, ColumnFormat format);

std::string render_report(const ReportDocument& doc, RenderStyle style);

// Inverse of the JSON rendering.
ReportDocument parse_report_json(const std::string& text);

ReportMetadata base_metadata();

ReportDocument judge_report_document(const JudgeReport& report, ReportMetadata metadata);
ReportDocument comparison_report_document(const ComparisonReport& report,
                                          ReportMetadata metadata);
ReportDocument sweep_document(const std::vector<SweepRow>& rows, ReportMetadata metadata);
ReportDocument diagnostics_document(const Diagnostics& d, const RatingsMatrix& m,
                                    ReportMetadata metadata);

// Per-metric distribution of consolidated levels with skewness.
ReportDocument skewness_document(const ConsolidatedRatings& c, int k,
                                 const std::vector<std::string>& metrics,
                                 const std::optional<std::string>& system,
                                 ReportMetadata metadata);

}  // namespace judgekit
