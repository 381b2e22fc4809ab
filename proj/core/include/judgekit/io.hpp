#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "judgekit/pipeline.hpp"
#include "judgekit/ratings.hpp"

namespace judgekit {

enum class RatingsFormat { LongCsv, WideCsv };
enum class RunsFormat { Jsonl, Csv };

RatingsFormat parse_ratings_format(const std::string& text);
RunsFormat parse_runs_format(const std::string& text);

// Long CSV: header `item,rater,rating`, one row per cell, empty rating is
// missing. Wide CSV: header `item,<rater1>,...`, one row per item. Items and
// raters keep first-appearance order. Errors carry `source:line`.
RatingsMatrix parse_ratings_text(std::string_view text, RatingsFormat format,
                                 const OrdinalScale& scale, const std::string& source = "<input>");
RatingsMatrix parse_ratings(const std::filesystem::path& path, RatingsFormat format,
                            const OrdinalScale& scale);

// Fields: query_id, system_id, metric, run, rating.
std::vector<RunRecord> parse_runs_text(std::string_view text, RunsFormat format, int k,
                                       const std::string& source = "<input>");
std::vector<RunRecord> parse_runs(const std::filesystem::path& path, RunsFormat format, int k);

std::string write_runs(const std::vector<RunRecord>& records, RunsFormat format);

std::string read_file(const std::filesystem::path& path);

// CRLF folded to LF and a trailing LF ensured.
std::string canonicalize(std::string_view bytes);

// Lowercase hex SHA-256 of the canonicalized bytes.
std::string digest(std::string_view bytes);

// Splits one CSV record; double quotes may wrap fields, "" escapes a quote.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace judgekit
