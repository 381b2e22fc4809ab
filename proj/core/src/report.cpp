#include "judgekit/report.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"
#include "judgekit/error.hpp"
#include "judgekit/version.hpp"

namespace judgekit {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string printf_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string sanitize_tsv(std::string s) {
  for (char& c : s) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::string escape_markdown(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

ordered_json cell_to_json(const ReportCell& cell, ColumnFormat format) {
  switch (cell.kind) {
    case ReportCell::Kind::Text: return cell.text;
    case ReportCell::Kind::Number:
      if (format == ColumnFormat::Integer) return static_cast<long long>(std::llround(cell.number));
      return cell.number;
    case ReportCell::Kind::Undefined: return ordered_json{{"undefined", cell.text}};
  }
  return nullptr;
}

ReportCell cell_from_json(const ordered_json& v) {
  if (v.is_string()) return ReportCell::of_text(v.get<std::string>());
  if (v.is_number()) return ReportCell::of_number(v.get<double>());
  if (v.is_object() && v.contains("undefined")) {
    return ReportCell::undefined(v.at("undefined").get<std::string>());
  }
  throw Error(ErrorKind::Parse, "report cell must be a string, number or {\"undefined\": ...}");
}

std::string render_json(const ReportDocument& doc) {
  ordered_json root;
  root["schema_version"] = kReportSchemaVersion;
  root["kind"] = to_string(doc.kind);
  ordered_json meta;
  meta["toolkit_version"] = doc.metadata.toolkit_version;
  meta["input_digests"] = ordered_json::object();
  for (const auto& [name, hash] : doc.metadata.input_digests) meta["input_digests"][name] = hash;
  meta["seed"] = doc.metadata.seed ? ordered_json(*doc.metadata.seed) : ordered_json(nullptr);
  meta["decisions"] = ordered_json::object();
  for (const auto& [key, value] : doc.metadata.decisions) meta["decisions"][key] = value;
  root["metadata"] = meta;
  root["columns"] = ordered_json::array();
  for (const auto& c : doc.columns) {
    root["columns"].push_back({{"name", c.name}, {"format", to_string(c.format)}});
  }
  root["rows"] = ordered_json::array();
  for (const auto& row : doc.rows) {
    ordered_json cells = ordered_json::object();
    for (std::size_t i = 0; i < doc.columns.size() && i < row.cells.size(); ++i) {
      cells[doc.columns[i].name] = cell_to_json(row.cells[i], doc.columns[i].format);
    }
    ordered_json r;
    r["cells"] = cells;
    if (!row.best.empty()) {
      r["best"] = ordered_json::array();
      for (std::size_t i = 0; i < row.best.size(); ++i) {
        if (row.best[i]) r["best"].push_back(doc.columns[i].name);
      }
    }
    root["rows"].push_back(r);
  }
  return root.dump(2) + "\n";
}

std::string render_tsv(const ReportDocument& doc) {
  std::ostringstream out;
  out << "# kind: " << to_string(doc.kind) << '\n';
  out << "# schema_version: " << kReportSchemaVersion << '\n';
  out << "# toolkit_version: " << doc.metadata.toolkit_version << '\n';
  for (const auto& [name, hash] : doc.metadata.input_digests) {
    out << "# input: " << sanitize_tsv(name) << " sha256:" << hash << '\n';
  }
  if (doc.metadata.seed) out << "# seed: " << *doc.metadata.seed << '\n';
  for (const auto& [key, value] : doc.metadata.decisions) {
    out << "# " << sanitize_tsv(key) << ": " << sanitize_tsv(value) << '\n';
  }
  for (std::size_t i = 0; i < doc.columns.size(); ++i) {
    out << (i ? "\t" : "") << sanitize_tsv(doc.columns[i].name);
  }
  out << '\n';
  for (const auto& row : doc.rows) {
    for (std::size_t i = 0; i < doc.columns.size(); ++i) {
      const ReportCell cell = i < row.cells.size() ? row.cells[i] : ReportCell::undefined("");
      out << (i ? "\t" : "") << sanitize_tsv(format_cell(cell, doc.columns[i].format));
    }
    out << '\n';
  }
  return out.str();
}

std::string render_markdown(const ReportDocument& doc) {
  std::ostringstream out;
  out << "### " << to_string(doc.kind) << "\n\n|";
  for (const auto& c : doc.columns) out << ' ' << escape_markdown(c.name) << " |";
  out << "\n|";
  for (const auto& c : doc.columns) out << (c.format == ColumnFormat::Text ? " --- |" : " ---: |");
  out << '\n';
  for (const auto& row : doc.rows) {
    out << '|';
    for (std::size_t i = 0; i < doc.columns.size(); ++i) {
      const ReportCell cell = i < row.cells.size() ? row.cells[i] : ReportCell::undefined("");
      std::string text = escape_markdown(format_cell(cell, doc.columns[i].format));
      if (i < row.best.size() && row.best[i]) text = "**" + text + "**";
      out << ' ' << text << " |";
    }
    out << '\n';
  }
  out << "\n- toolkit version: " << doc.metadata.toolkit_version << " (schema "
      << kReportSchemaVersion << ")\n";
  for (const auto& [name, hash] : doc.metadata.input_digests) {
    out << "- input `" << name << "`: sha256 `" << hash << "`\n";
  }
  if (doc.metadata.seed) out << "- seed: " << *doc.metadata.seed << '\n';
  for (const auto& [key, value] : doc.metadata.decisions) {
    out << "- " << escape_markdown(key) << ": " << escape_markdown(value) << '\n';
  }
  return out.str();
}

}  // namespace

const char* to_string(ReportKind kind) {
  switch (kind) {
    case ReportKind::JudgeReport: return "judge-report";
    case ReportKind::ComparisonReport: return "comparison-report";
    case ReportKind::SweepTable: return "sweep-table";
    case ReportKind::Diagnostics: return "diagnostics";
    case ReportKind::SkewnessTable: return "skewness-table";
  }
  return "diagnostics";
}

const char* to_string(ColumnFormat format) {
  switch (format) {
    case ColumnFormat::Text: return "text";
    case ColumnFormat::Integer: return "integer";
    case ColumnFormat::Coefficient: return "coefficient";
    case ColumnFormat::PValue: return "p-value";
  }
  return "text";
}

const char* to_string(RenderStyle style) {
  switch (style) {
    case RenderStyle::Tsv: return "tsv";
    case RenderStyle::Json: return "json";
    case RenderStyle::Markdown: return "markdown";
  }
  return "tsv";
}

ReportKind parse_report_kind(const std::string& text) {
  for (ReportKind k : {ReportKind::JudgeReport, ReportKind::ComparisonReport, ReportKind::SweepTable,
                       ReportKind::Diagnostics, ReportKind::SkewnessTable}) {
    if (text == to_string(k)) return k;
  }
  throw Error(ErrorKind::Parse, "unknown report kind '" + text + "'");
}

ColumnFormat parse_column_format(const std::string& text) {
  for (ColumnFormat f :
       {ColumnFormat::Text, ColumnFormat::Integer, ColumnFormat::Coefficient, ColumnFormat::PValue}) {
    if (text == to_string(f)) return f;
  }
  throw Error(ErrorKind::Parse, "unknown column format '" + text + "'");
}

RenderStyle parse_render_style(const std::string& text) {
  if (text == "tsv") return RenderStyle::Tsv;
  if (text == "json") return RenderStyle::Json;
  if (text == "markdown" || text == "md") return RenderStyle::Markdown;
  throw Error(ErrorKind::InvalidArgument, "unknown output format '" + text + "'");
}

ReportCell ReportCell::of_metric(const MetricValue& v) {
  return v.value ? of_number(*v.value) : undefined(v.undefined_reason);
}

std::string format_cell(const ReportCell& cell, ColumnFormat format) {
  switch (cell.kind) {
    case ReportCell::Kind::Text: return cell.text;
    case ReportCell::Kind::Undefined:
      return cell.text.empty() ? "undefined" : "undefined (" + cell.text + ")";
    case ReportCell::Kind::Number: break;
  }
  const double v = cell.number;
  switch (format) {
    case ColumnFormat::Integer: return std::to_string(std::llround(v));
    case ColumnFormat::PValue:
      if (v != 0.0 && std::abs(v) < 1e-4) return printf_double("%.3e", v);
      return printf_double("%.4f", v);
    case ColumnFormat::Coefficient:
    case ColumnFormat::Text:
      break;
  }
  std::string s = printf_double("%.4f", v);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::string render_report(const ReportDocument& doc, RenderStyle style) {
  switch (style) {
    case RenderStyle::Tsv: return render_tsv(doc);
    case RenderStyle::Json: return render_json(doc);
    case RenderStyle::Markdown: return render_markdown(doc);
  }
  return render_tsv(doc);
}

ReportDocument parse_report_json(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("invalid report JSON: ") + e.what());
  }
  try {
    if (root.at("schema_version").get<int>() != kReportSchemaVersion) {
      throw Error(ErrorKind::Parse, "unsupported report schema_version");
    }
    ReportDocument doc;
    doc.kind = parse_report_kind(root.at("kind").get<std::string>());
    const auto& meta = root.at("metadata");
    doc.metadata.toolkit_version = meta.at("toolkit_version").get<std::string>();
    for (const auto& [name, hash] : meta.at("input_digests").items()) {
      doc.metadata.input_digests[name] = hash.get<std::string>();
    }
    if (!meta.at("seed").is_null()) doc.metadata.seed = meta.at("seed").get<std::uint64_t>();
    for (const auto& [key, value] : meta.at("decisions").items()) {
      doc.metadata.decisions.emplace_back(key, value.get<std::string>());
    }
    for (const auto& c : root.at("columns")) {
      doc.columns.push_back(
          {c.at("name").get<std::string>(), parse_column_format(c.at("format").get<std::string>())});
    }
    for (const auto& r : root.at("rows")) {
      ReportRow row;
      const auto& cells = r.at("cells");
      for (const auto& c : doc.columns) {
        row.cells.push_back(cells.contains(c.name) ? cell_from_json(cells.at(c.name))
                                                   : ReportCell::undefined(""));
      }
      if (r.contains("best")) {
        row.best.assign(doc.columns.size(), false);
        std::set<std::string> names;
        for (const auto& b : r.at("best")) names.insert(b.get<std::string>());
        for (std::size_t i = 0; i < doc.columns.size(); ++i) {
          row.best[i] = names.count(doc.columns[i].name) > 0;
        }
      }
      doc.rows.push_back(std::move(row));
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed report JSON: ") + e.what());
  }
}

ReportMetadata base_metadata() {
  ReportMetadata m;
  m.toolkit_version = kToolkitVersion;
  return m;
}

ReportDocument judge_report_document(const JudgeReport& report, ReportMetadata metadata) {
  ReportDocument doc;
  doc.kind = ReportKind::JudgeReport;
  doc.metadata = std::move(metadata);
  doc.columns = {{"Judge", ColumnFormat::Text}, {"Items", ColumnFormat::Integer}};
  for (std::size_t c = 0; c < kProfileColumns; ++c) {
    doc.columns.push_back({column_title(static_cast<ProfileColumn>(c)), ColumnFormat::Coefficient});
  }
  for (const auto& r : report.rows) {
    ReportRow row;
    row.cells.push_back(ReportCell::of_text(r.judge));
    row.cells.push_back(ReportCell::of_number(static_cast<double>(r.profile.n_items)));
    row.best = {false, false};
    for (std::size_t c = 0; c < kProfileColumns; ++c) {
      row.cells.push_back(ReportCell::of_metric(r.profile.cells[c]));
      row.best.push_back(r.best[c]);
    }
    doc.rows.push_back(std::move(row));
  }
  return doc;
}

ReportDocument comparison_report_document(const ComparisonReport& report, ReportMetadata metadata) {
  ReportDocument doc;
  doc.kind = ReportKind::ComparisonReport;
  doc.metadata = std::move(metadata);
  const CompareOptions& o = report.options;
  doc.metadata.decisions.emplace_back("system_a", report.system_a);
  doc.metadata.decisions.emplace_back("system_b", report.system_b);
  doc.metadata.decisions.emplace_back("queries", std::to_string(report.n_queries));
  doc.metadata.decisions.emplace_back("test", "wilcoxon-signed-rank");
  doc.metadata.decisions.emplace_back("difference", "B - A on each metric's better-is-higher scale");
  doc.metadata.decisions.emplace_back("correction", to_string(o.correction));
  doc.metadata.decisions.emplace_back("pooling", to_string(o.pooling));
  doc.metadata.decisions.emplace_back("alpha", printf_double("%g", o.alpha));
  doc.metadata.decisions.emplace_back("zero_policy", to_string(o.zero_policy));
  doc.metadata.decisions.emplace_back("mode", to_string(o.mode));

  doc.columns = {{"Metric", ColumnFormat::Text},        {"Hypothesis", ColumnFormat::Text},
                 {"Polarity", ColumnFormat::Text},      {"N", ColumnFormat::Integer},
                 {"W+", ColumnFormat::Coefficient},     {"Raw p", ColumnFormat::PValue},
                 {"Adjusted p", ColumnFormat::PValue},  {"Rejected", ColumnFormat::Text},
                 {"Verdict", ColumnFormat::Text},       {"Note", ColumnFormat::Text}};
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const DirectionRow& r = report.rows[i];
    const MetricVerdict& v = report.verdicts[i / 2];
    const bool greater = r.direction == Alternative::Greater;
    ReportRow row;
    row.cells.push_back(ReportCell::of_text(r.metric));
    row.cells.push_back(ReportCell::of_text(greater ? report.system_b + " > " + report.system_a
                                                    : report.system_a + " > " + report.system_b));
    row.cells.push_back(ReportCell::of_text(
        v.polarity == Polarity::HigherIsBetter ? "higher-is-better" : "lower-is-better"));
    row.cells.push_back(ReportCell::of_number(static_cast<double>(v.n_queries)));
    row.cells.push_back(r.no_signal ? ReportCell::undefined("no-signal")
                                    : ReportCell::of_number(r.statistic));
    row.cells.push_back(ReportCell::of_number(r.raw_p));
    row.cells.push_back(ReportCell::of_number(r.adjusted_p));
    row.cells.push_back(ReportCell::of_text(r.rejected ? "yes" : "no"));
    row.cells.push_back(ReportCell::of_text(to_string(v.verdict)));
    row.cells.push_back(ReportCell::of_text(r.no_signal ? "no-signal" : to_string(r.mode)));
    doc.rows.push_back(std::move(row));
  }
  return doc;
}

ReportDocument sweep_document(const std::vector<SweepRow>& rows, ReportMetadata metadata) {
  ReportDocument doc;
  doc.kind = ReportKind::SweepTable;
  doc.metadata = std::move(metadata);
  doc.metadata.decisions.emplace_back(
      "construction", "2 raters, 2 categories; dominant marginal share s, agreement A_o, "
                      "disagreements split evenly");
  doc.metadata.decisions.emplace_back("alpha_difference", "nominal");
  doc.columns = {{"Share", ColumnFormat::Coefficient},  {"Observed", ColumnFormat::Coefficient},
                 {"Kappa", ColumnFormat::Coefficient},  {"Alpha", ColumnFormat::Coefficient},
                 {"AC1", ColumnFormat::Coefficient},    {"AC2-L", ColumnFormat::Coefficient},
                 {"AC2-Q", ColumnFormat::Coefficient}};
  for (const auto& r : rows) {
    doc.rows.push_back({{ReportCell::of_number(r.share), ReportCell::of_number(r.observed_agreement),
                         ReportCell::of_metric(r.kappa), ReportCell::of_metric(r.alpha),
                         ReportCell::of_metric(r.ac1), ReportCell::of_metric(r.ac2_linear),
                         ReportCell::of_metric(r.ac2_quadratic)},
                        {}});
  }
  return doc;
}

ReportDocument diagnostics_document(const Diagnostics& d, const RatingsMatrix& m,
                                    ReportMetadata metadata) {
  ReportDocument doc;
  doc.kind = ReportKind::Diagnostics;
  doc.metadata = std::move(metadata);
  doc.columns = {{"Check", ColumnFormat::Text}, {"Value", ColumnFormat::Text}};
  auto add = [&](const std::string& key, const std::string& value) {
    doc.rows.push_back({{ReportCell::of_text(key), ReportCell::of_text(value)}, {}});
  };
  add("items", std::to_string(d.n_items));
  add("raters", std::to_string(d.n_raters));
  add("missing cells", std::to_string(d.missing_cells));
  add("co-rated items", std::to_string(d.co_rated_items));
  for (std::size_t k = 0; k < d.category_totals.size(); ++k) {
    add("level " + m.scale().label(static_cast<int>(k) + 1), std::to_string(d.category_totals[k]));
  }
  add("violations", std::to_string(d.violations.size()));
  for (const auto& v : d.violations) {
    add(v.kind == ViolationKind::OutOfRange ? "out-of-range" : "no-co-rated-items", v.message);
  }
  return doc;
}

ReportDocument skewness_document(const ConsolidatedRatings& c, int k,
                                 const std::vector<std::string>& metrics,
                                 const std::optional<std::string>& system,
                                 ReportMetadata metadata) {
  ReportDocument doc;
  doc.kind = ReportKind::SkewnessTable;
  doc.metadata = std::move(metadata);
  doc.metadata.decisions.emplace_back("estimator", "adjusted Fisher-Pearson (G1)");
  doc.metadata.decisions.emplace_back("systems", system ? *system : "all");
  doc.columns = {{"Metric", ColumnFormat::Text},
                 {"N", ColumnFormat::Integer},
                 {"Mean", ColumnFormat::Coefficient},
                 {"Skewness", ColumnFormat::Coefficient}};
  for (int level = 1; level <= k; ++level) {
    doc.columns.push_back({"Level " + std::to_string(level), ColumnFormat::Integer});
  }
  for (const auto& metric : metrics) {
    std::vector<double> values;
    std::vector<long long> counts(static_cast<std::size_t>(k), 0);
    for (const auto& [key, vote] : c.entries) {
      if (key.metric != metric || (system && key.system_id != *system)) continue;
      values.push_back(vote.level);
      if (vote.level >= 1 && vote.level <= k) ++counts[vote.level - 1];
    }
    ReportRow row;
    row.cells.push_back(ReportCell::of_text(metric));
    row.cells.push_back(ReportCell::of_number(static_cast<double>(values.size())));
    if (values.empty()) {
      row.cells.push_back(ReportCell::undefined("no-data"));
      row.cells.push_back(ReportCell::undefined("no-data"));
    } else {
      double sum = 0.0;
      for (double v : values) sum += v;
      row.cells.push_back(ReportCell::of_number(sum / static_cast<double>(values.size())));
      try {
        row.cells.push_back(ReportCell::of_number(sample_skewness(values)));
      } catch (const Error& e) {
        row.cells.push_back(ReportCell::undefined(std::string(to_string(e.kind()))));
      }
    }
    for (long long count : counts) row.cells.push_back(ReportCell::of_number(static_cast<double>(count)));
    doc.rows.push_back(std::move(row));
  }
  return doc;
}

}  // namespace judgekit
