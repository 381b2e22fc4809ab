#include "judgekit/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"

#include "judgekit/error.hpp"

namespace judgekit {

namespace {

struct Line {
  std::size_t number;
  std::string text;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0, start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({++number, std::string(line)});
    start = end + 1;
  }
  return lines;
}

[[noreturn]] void fail(ErrorKind kind, const std::string& source, std::size_t line,
                       const std::string& message) {
  throw Error(kind, source + ":" + std::to_string(line) + ": " + message);
}

int parse_int(const std::string& text, const std::string& source, std::size_t line,
              const std::string& field) {
  int value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    fail(ErrorKind::Parse, source, line, field + " '" + text + "' is not an integer");
  }
  return value;
}

std::optional<int> parse_level(const std::string& text, const OrdinalScale& scale,
                               const std::string& source, std::size_t line) {
  if (text.empty()) return std::nullopt;
  const int level = parse_int(text, source, line, "rating");
  if (!scale.contains(level)) {
    fail(ErrorKind::Parse, source, line,
         "rating '" + text + "' outside 1.." + std::to_string(scale.size()));
  }
  return level;
}

void expect_header(const std::vector<std::string>& got, const std::vector<std::string>& want,
                   const std::string& source, std::size_t line) {
  if (got != want) {
    std::string expected;
    for (const auto& w : want) expected += (expected.empty() ? "" : ",") + w;
    fail(ErrorKind::Parse, source, line, "expected header '" + expected + "'");
  }
}

RatingsMatrix parse_long(const std::vector<Line>& lines, const OrdinalScale& scale,
                         const std::string& source) {
  expect_header(split_csv_line(lines.front().text), {"item", "rater", "rating"}, source, 1);
  std::vector<std::string> items, raters;
  std::map<std::string, std::size_t> item_index, rater_index;
  std::map<std::pair<std::size_t, std::size_t>, Cell> cells;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.text.empty()) continue;
    const auto fields = split_csv_line(l.text);
    if (fields.size() != 3) {
      fail(ErrorKind::Parse, source, l.number,
           "expected 3 columns, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) fail(ErrorKind::Parse, source, l.number, "empty item id (column 1)");
    if (fields[1].empty()) fail(ErrorKind::Parse, source, l.number, "empty rater id (column 2)");
    const Cell level = parse_level(fields[2], scale, source, l.number);
    auto [it, new_item] = item_index.emplace(fields[0], items.size());
    if (new_item) items.push_back(fields[0]);
    auto [rt, new_rater] = rater_index.emplace(fields[1], raters.size());
    if (new_rater) raters.push_back(fields[1]);
    if (!cells.emplace(std::make_pair(it->second, rt->second), level).second) {
      fail(ErrorKind::Integrity, source, l.number,
           "duplicate rating for item '" + fields[0] + "', rater '" + fields[1] + "'");
    }
  }
  std::vector<Cell> grid(items.size() * raters.size());
  for (const auto& [pos, level] : cells) grid[pos.first * raters.size() + pos.second] = level;
  return RatingsMatrix(std::move(items), std::move(raters), std::move(grid), scale);
}

RatingsMatrix parse_wide(const std::vector<Line>& lines, const OrdinalScale& scale,
                         const std::string& source) {
  const auto header = split_csv_line(lines.front().text);
  if (header.size() < 2 || header[0] != "item") {
    fail(ErrorKind::Parse, source, 1, "expected header 'item,<rater>,...'");
  }
  std::vector<std::string> raters(header.begin() + 1, header.end());
  std::set<std::string> seen_raters;
  for (const auto& r : raters) {
    if (r.empty() || !seen_raters.insert(r).second) {
      fail(ErrorKind::Parse, source, 1, "rater ids in the header must be unique and nonempty");
    }
  }
  std::vector<std::string> items;
  std::set<std::string> seen_items;
  std::vector<Cell> grid;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.text.empty()) continue;
    const auto fields = split_csv_line(l.text);
    if (fields.size() != header.size()) {
      fail(ErrorKind::Parse, source, l.number,
           "expected " + std::to_string(header.size()) + " columns, found " +
               std::to_string(fields.size()));
    }
    if (fields[0].empty()) fail(ErrorKind::Parse, source, l.number, "empty item id (column 1)");
    if (!seen_items.insert(fields[0]).second) {
      fail(ErrorKind::Integrity, source, l.number, "duplicate item '" + fields[0] + "'");
    }
    items.push_back(fields[0]);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      grid.push_back(parse_level(fields[c], scale, source, l.number));
    }
  }
  return RatingsMatrix(std::move(items), std::move(raters), std::move(grid), scale);
}

RunRecord make_record(std::string query, std::string system, std::string metric, int run,
                      int rating, int k, const std::string& source, std::size_t line) {
  if (query.empty()) fail(ErrorKind::Parse, source, line, "empty query_id");
  if (system.empty()) fail(ErrorKind::Parse, source, line, "empty system_id");
  if (metric.empty()) fail(ErrorKind::Parse, source, line, "empty metric");
  if (run < 1) {
    fail(ErrorKind::Parse, source, line, "run index " + std::to_string(run) + " must be >= 1");
  }
  if (rating < 1 || rating > k) {
    fail(ErrorKind::Parse, source, line,
         "rating " + std::to_string(rating) + " outside 1.." + std::to_string(k));
  }
  return {std::move(query), std::move(system), std::move(metric), run, rating};
}

std::string json_id(const nlohmann::json& v, const char* field, const std::string& source,
                    std::size_t line) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  fail(ErrorKind::Parse, source, line, std::string("field '") + field + "' must be a string");
}

int json_int(const nlohmann::json& v, const char* field, const std::string& source,
             std::size_t line) {
  if (!v.is_number_integer()) {
    fail(ErrorKind::Parse, source, line, std::string("field '") + field + "' must be an integer");
  }
  return v.get<int>();
}

}  // namespace

RatingsFormat parse_ratings_format(const std::string& text) {
  if (text == "long-csv") return RatingsFormat::LongCsv;
  if (text == "wide-csv") return RatingsFormat::WideCsv;
  throw Error(ErrorKind::InvalidArgument, "unknown ratings format '" + text + "'");
}

RunsFormat parse_runs_format(const std::string& text) {
  if (text == "run-jsonl") return RunsFormat::Jsonl;
  if (text == "run-csv") return RunsFormat::Csv;
  throw Error(ErrorKind::InvalidArgument, "unknown runs format '" + text + "'");
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        current += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += ch;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

RatingsMatrix parse_ratings_text(std::string_view text, RatingsFormat format,
                                 const OrdinalScale& scale, const std::string& source) {
  const std::vector<Line> lines = split_lines(text);
  if (lines.empty()) fail(ErrorKind::Parse, source, 1, "missing header row");
  return format == RatingsFormat::LongCsv ? parse_long(lines, scale, source)
                                          : parse_wide(lines, scale, source);
}

RatingsMatrix parse_ratings(const std::filesystem::path& path, RatingsFormat format,
                            const OrdinalScale& scale) {
  return parse_ratings_text(read_file(path), format, scale, path.string());
}

std::vector<RunRecord> parse_runs_text(std::string_view text, RunsFormat format, int k,
                                       const std::string& source) {
  const std::vector<Line> lines = split_lines(text);
  std::vector<RunRecord> records;
  std::map<std::tuple<std::string, std::string, std::string, int>, std::size_t> first_seen;
  auto push = [&](RunRecord r, std::size_t line) {
    auto key = std::make_tuple(r.query_id, r.system_id, r.metric, r.run);
    auto [it, inserted] = first_seen.emplace(key, line);
    if (!inserted) {
      fail(ErrorKind::Integrity, source, line,
           "duplicate run (" + r.query_id + ", " + r.system_id + ", " + r.metric + ", run " +
               std::to_string(r.run) + "), first seen on line " + std::to_string(it->second));
    }
    records.push_back(std::move(r));
  };

  if (format == RunsFormat::Csv) {
    if (lines.empty()) fail(ErrorKind::Parse, source, 1, "missing header row");
    expect_header(split_csv_line(lines.front().text),
                  {"query_id", "system_id", "metric", "run", "rating"}, source, 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const Line& l = lines[i];
      if (l.text.empty()) continue;
      auto f = split_csv_line(l.text);
      if (f.size() != 5) {
        fail(ErrorKind::Parse, source, l.number,
             "expected 5 columns, found " + std::to_string(f.size()));
      }
      const int run = parse_int(f[3], source, l.number, "run");
      const int rating = parse_int(f[4], source, l.number, "rating");
      push(make_record(f[0], f[1], f[2], run, rating, k, source, l.number), l.number);
    }
    return records;
  }

  for (const Line& l : lines) {
    if (l.text.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(l.text);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorKind::Parse, source, l.number, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) fail(ErrorKind::Parse, source, l.number, "expected a JSON object");
    for (const char* field : {"query_id", "system_id", "metric", "run", "rating"}) {
      if (!obj.contains(field)) {
        fail(ErrorKind::Parse, source, l.number, std::string("missing field '") + field + "'");
      }
    }
    if (!obj["metric"].is_string()) {
      fail(ErrorKind::Parse, source, l.number, "field 'metric' must be a string");
    }
    push(make_record(json_id(obj["query_id"], "query_id", source, l.number),
                     json_id(obj["system_id"], "system_id", source, l.number),
                     obj["metric"].get<std::string>(),
                     json_int(obj["run"], "run", source, l.number),
                     json_int(obj["rating"], "rating", source, l.number), k, source, l.number),
         l.number);
  }
  return records;
}

std::vector<RunRecord> parse_runs(const std::filesystem::path& path, RunsFormat format, int k) {
  return parse_runs_text(read_file(path), format, k, path.string());
}

std::string write_runs(const std::vector<RunRecord>& records, RunsFormat format) {
  std::ostringstream out;
  if (format == RunsFormat::Csv) {
    auto quote = [](const std::string& s) {
      if (s.find_first_of(",\"") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      return q + "\"";
    };
    out << "query_id,system_id,metric,run,rating\n";
    for (const auto& r : records) {
      out << quote(r.query_id) << ',' << quote(r.system_id) << ',' << quote(r.metric) << ','
          << r.run << ',' << r.rating << '\n';
    }
    return out.str();
  }
  for (const auto& r : records) {
    nlohmann::ordered_json obj;
    obj["query_id"] = r.query_id;
    obj["system_id"] = r.system_id;
    obj["metric"] = r.metric;
    obj["run"] = r.run;
    obj["rating"] = r.rating;
    out << obj.dump() << '\n';
  }
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string canonicalize(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size() + 1);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (bytes[i] == '\r' && i + 1 < bytes.size() && bytes[i + 1] == '\n') continue;
    out += bytes[i];
  }
  if (out.empty() || out.back() != '\n') out += '\n';
  return out;
}

std::string digest(std::string_view bytes) {
  const std::string canonical = canonicalize(bytes);
  unsigned char hash[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(canonical.data(), canonical.size(), hash, &length, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[hash[i] >> 4];
    hex += kHex[hash[i] & 0xF];
  }
  return hex;
}

}  // namespace judgekit
