#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "judgekit/error.hpp"
#include "judgekit/io.hpp"
#include "judgekit/report.hpp"
#include "judgekit/synthetic.hpp"

using namespace judgekit;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected judgekit::Error");
  return ErrorKind::InvalidArgument;
}

std::string error_text(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

const OrdinalScale kScale4 = OrdinalScale::levels(4);

ComparisonReport sample_comparison() {
  const auto c = consolidate_runs(generate_synthetic_runs(SyntheticOptions{}));
  return compare_systems(c, "A", "B", {kStandardMetrics.begin(), kStandardMetrics.end()});
}

JudgeReport sample_judges() {
  std::vector<Cell> cells;
  std::vector<std::string> items;
  const int gold[] = {1, 2, 3, 4, 2, 3, 1, 4, 2, 2};
  for (int i = 0; i < 10; ++i) {
    items.push_back("i" + std::to_string(i));
    cells.insert(cells.end(), {gold[i], gold[i], 5 - gold[i], 3});
  }
  const RatingsMatrix m(items, {"gold", "good", "reversed", "flat"}, cells, kScale4);
  return evaluate_judges(m, "gold");
}

}  // namespace

TEST_CASE("long csv") {
  const std::string text = "item,rater,rating\nq1,a,1\nq1,b,2\nq2,a,3\nq2,b,3\nq3,a,4\nq3,b,\n";
  const auto m = parse_ratings_text(text, RatingsFormat::LongCsv, kScale4);
  CHECK(m.n_items() == 3);
  CHECK(m.n_raters() == 2);
  CHECK(m.at(0, 1) == Cell{2});
  CHECK_FALSE(m.at(2, 1).has_value());
  CHECK(m.items() == std::vector<std::string>{"q1", "q2", "q3"});

  const std::string crlf = "item,rater,rating\r\nq1,a,1\r\nq1,b,2\r\n";
  CHECK(parse_ratings_text(crlf, RatingsFormat::LongCsv, kScale4).at(0, 1) == Cell{2});

  const std::string bad = "item,rater,rating\nq1,a,1\nq1,b,5\n";
  CHECK(kind_of([&] { parse_ratings_text(bad, RatingsFormat::LongCsv, kScale4, "x.csv"); }) == ErrorKind::Parse);
  const std::string msg = error_text([&] { parse_ratings_text(bad, RatingsFormat::LongCsv, kScale4, "x.csv"); });
  CHECK(msg.find("x.csv:3") != std::string::npos);
  CHECK(msg.find("'5'") != std::string::npos);

  for (const char* junk : {"item,rater,rating\nq1,a,0\n", "item,rater,rating\nq1,a,2.5\n",
                           "item,rater,rating\nq1,a,nan\n", "item,rater,rating\nq1,a\n",
                           "item,rater\nq1,a\n", ""}) {
    CHECK(kind_of([&] { parse_ratings_text(junk, RatingsFormat::LongCsv, kScale4); }) == ErrorKind::Parse);
  }
  const std::string dup = "item,rater,rating\nq1,a,1\nq1,a,2\n";
  CHECK(kind_of([&] { parse_ratings_text(dup, RatingsFormat::LongCsv, kScale4); }) == ErrorKind::Integrity);
}

TEST_CASE("wide csv") {
  const std::string text = "item,gold,judge\nq1,1,1\nq2,2,\nq3,4,3\n";
  const auto m = parse_ratings_text(text, RatingsFormat::WideCsv, kScale4);
  CHECK(m.n_items() == 3);
  CHECK(m.raters() == std::vector<std::string>{"gold", "judge"});
  CHECK_FALSE(m.at(1, 1).has_value());
  CHECK(m.at(2, 1) == Cell{3});

  CHECK(kind_of([] { parse_ratings_text("item,a,b\nq1,1\n", RatingsFormat::WideCsv, kScale4); }) ==
        ErrorKind::Parse);
  CHECK(kind_of([] { parse_ratings_text("item,a\nq1,1\nq1,2\n", RatingsFormat::WideCsv, kScale4); }) ==
        ErrorKind::Integrity);
}

TEST_CASE("csv field splitting") {
  CHECK(split_csv_line("a,\"b,c\",d") == std::vector<std::string>{"a", "b,c", "d"});
  CHECK(split_csv_line("\"say \"\"hi\"\"\",") == std::vector<std::string>{"say \"hi\"", ""});
}

TEST_CASE("run records") {
  const std::string jsonl =
      "{\"query_id\":\"q1\",\"system_id\":\"A\",\"metric\":\"Relevance\",\"run\":1,\"rating\":3}\n"
      "{\"query_id\":7,\"system_id\":\"B\",\"metric\":\"Relevance\",\"run\":2,\"rating\":4}\n";
  const auto r = parse_runs_text(jsonl, RunsFormat::Jsonl, 4);
  REQUIRE(r.size() == 2);
  CHECK(r[1].query_id == "7");
  CHECK(r[1].run == 2);

  const std::string zero = "{\"query_id\":\"q1\",\"system_id\":\"A\",\"metric\":\"Relevance\",\"run\":0,\"rating\":3}\n";
  CHECK(kind_of([&] { parse_runs_text(zero, RunsFormat::Jsonl, 4); }) == ErrorKind::Parse);
  const std::string high = "{\"query_id\":\"q1\",\"system_id\":\"A\",\"metric\":\"Relevance\",\"run\":1,\"rating\":5}\n";
  CHECK(kind_of([&] { parse_runs_text(high, RunsFormat::Jsonl, 4); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_runs_text("{not json}\n", RunsFormat::Jsonl, 4); }) == ErrorKind::Parse);
  const std::string dup =
      "{\"query_id\":\"q1\",\"system_id\":\"A\",\"metric\":\"Relevance\",\"run\":3,\"rating\":3}\n"
      "{\"query_id\":\"q1\",\"system_id\":\"A\",\"metric\":\"Relevance\",\"run\":3,\"rating\":2}\n";
  CHECK(kind_of([&] { parse_runs_text(dup, RunsFormat::Jsonl, 4); }) == ErrorKind::Integrity);

  const std::string csv = "query_id,system_id,metric,run,rating\nq1,A,Relevance,1,2\nq1,A,Relevance,2,3\n";
  CHECK(parse_runs_text(csv, RunsFormat::Csv, 4).size() == 2);
  CHECK(kind_of([] {
          parse_runs_text("query_id,system_id,metric,run,rating\nq1,A,Relevance,0,2\n", RunsFormat::Csv, 4);
        }) == ErrorKind::Parse);
}

TEST_CASE("synthetic protocol round trips through both run formats") {
  const auto runs = generate_synthetic_runs(SyntheticOptions{});
  CHECK(runs.size() == 14040);
  for (RunsFormat f : {RunsFormat::Jsonl, RunsFormat::Csv}) {
    const std::string text = write_runs(runs, f);
    const auto back = parse_runs_text(text, f, 4);
    REQUIRE(back.size() == runs.size());
    CHECK(write_runs(back, f) == text);
  }
}

TEST_CASE("digests") {
  CHECK(digest("") == digest("\n"));
  CHECK(digest("a\r\nb") == digest("a\nb\n"));
  CHECK(digest("abc\n") == "edeaaff3f1774ad2888673770c6d64097e391bc362d7d6fb34982ddf0efd18cb");
  CHECK(canonicalize("x\r\ny") == "x\ny\n");

  const auto dir = std::filesystem::temp_directory_path() / "judgekit_io_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "r.csv") << "item,rater,rating\nq1,a,1\n";
  CHECK(read_file(dir / "r.csv") == "item,rater,rating\nq1,a,1\n");
  CHECK(parse_ratings(dir / "r.csv", RatingsFormat::LongCsv, kScale4).n_items() == 1);
  CHECK(kind_of([&] { read_file(dir / "missing.csv"); }) == ErrorKind::Parse);
}

TEST_CASE("cell formatting") {
  CHECK(format_cell(ReportCell::of_number(0.123456), ColumnFormat::Coefficient) == "0.1235");
  CHECK(format_cell(ReportCell::of_number(-0.00001), ColumnFormat::Coefficient) == "0.0000");
  CHECK(format_cell(ReportCell::of_number(0.0358), ColumnFormat::PValue) == "0.0358");
  CHECK(format_cell(ReportCell::of_number(1.215e-18), ColumnFormat::PValue) == "1.215e-18");
  CHECK(format_cell(ReportCell::of_number(0.0), ColumnFormat::PValue) == "0.0000");
  CHECK(format_cell(ReportCell::of_number(117), ColumnFormat::Integer) == "117");
  CHECK(format_cell(ReportCell::undefined("constant judge"), ColumnFormat::Coefficient) ==
        "undefined (constant judge)");
}

TEST_CASE("judge report rendering") {
  auto meta = base_metadata();
  meta.input_digests["ratings.csv"] = digest("x");
  const auto doc = judge_report_document(sample_judges(), meta);
  REQUIRE(doc.columns.size() == 9);
  CHECK(doc.columns[2].name == "Percent Agreement");
  CHECK(doc.columns[8].name == "Kendall Tau");

  const std::string md = render_report(doc, RenderStyle::Markdown);
  CHECK(md.find("| good |") != std::string::npos);
  CHECK(md.find("**1.0000**") != std::string::npos);
  CHECK(md.find("undefined (constant judge)") != std::string::npos);
  CHECK(md == render_report(doc, RenderStyle::Markdown));

  const std::string tsv = render_report(doc, RenderStyle::Tsv);
  CHECK(tsv.find("# kind: judge-report\n") == 0);
  CHECK(tsv.find("\n# toolkit_version: ") != std::string::npos);
  CHECK(tsv.find(meta.input_digests["ratings.csv"]) != std::string::npos);

  const std::string json = render_report(doc, RenderStyle::Json);
  CHECK(json.find("\"schema_version\": 1") != std::string::npos);
  CHECK(parse_report_json(json) == doc);
  CHECK(render_report(parse_report_json(json), RenderStyle::Json) == json);
}

TEST_CASE("comparison report rendering") {
  auto meta = base_metadata();
  meta.seed = 7;
  const auto doc = comparison_report_document(sample_comparison(), meta);
  CHECK(doc.rows.size() == 12);
  const std::string json = render_report(doc, RenderStyle::Json);
  CHECK(json.find("\"Raw p\"") != std::string::npos);
  CHECK(json.find("\"Adjusted p\"") != std::string::npos);
  CHECK(json.find("\"seed\": 7") != std::string::npos);
  const auto back = parse_report_json(json);
  CHECK(back == doc);
  CHECK(render_report(back, RenderStyle::Json) == json);
  for (RenderStyle s : {RenderStyle::Tsv, RenderStyle::Markdown, RenderStyle::Json}) {
    CHECK(render_report(doc, s) == render_report(comparison_report_document(sample_comparison(), meta), s));
  }
  CHECK(kind_of([] { parse_report_json("{\"schema_version\": 2}"); }) == ErrorKind::Parse);
}

TEST_CASE("sweep, diagnostics and skewness documents") {
  const auto sweep = sweep_document(prevalence_sweep({0.55, 0.95}, 0.9, 100), base_metadata());
  CHECK(sweep.rows.size() == 2);
  CHECK(parse_report_json(render_report(sweep, RenderStyle::Json)) == sweep);

  const auto m = RatingsMatrix::from_rows({{1, std::nullopt}, {std::nullopt, 2}}, 4);
  const auto diag = diagnostics_document(validate_matrix(m), m, base_metadata());
  CHECK_FALSE(diag.rows.empty());
  CHECK(parse_report_json(render_report(diag, RenderStyle::Json)) == diag);

  const auto c = consolidate_runs(generate_synthetic_runs(SyntheticOptions{}));
  const auto skew = skewness_document(c, 4, {kStandardMetrics.begin(), kStandardMetrics.end()}, "A",
                                      base_metadata());
  CHECK(skew.rows.size() == 6);
  CHECK(skew.columns.size() == 8);
  CHECK(parse_report_json(render_report(skew, RenderStyle::Json)) == skew);
}
