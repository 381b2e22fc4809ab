#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "judgekit/inference.hpp"
#include "judgekit/reliability.hpp"

namespace judgekit {

// The six quality metrics judged per query.
inline const std::array<std::string, 6> kStandardMetrics = {
    "Relevance",   "Completeness", "Extrinsic Hallucinations",
    "Readability", "Correctness",  "Inaccurate Hallucinations",
};

struct RunRecord {
  std::string query_id;
  std::string system_id;
  std::string metric;
  int run = 1;     // 1-based
  int rating = 1;  // level 1..K

  bool operator==(const RunRecord&) const = default;
};

struct RatingKey {
  std::string query_id;
  std::string system_id;
  std::string metric;

  auto operator<=>(const RatingKey&) const = default;
};

enum class TiePolicy { Lower };

struct Vote {
  int level = 0;
  int mode_count = 0;
  int n_runs = 0;
  bool tie = false;  // several levels share the top count

  bool operator==(const Vote&) const = default;
};

Vote majority_vote(const std::vector<int>& runs, TiePolicy policy = TiePolicy::Lower);

struct ConsolidatedRatings {
  std::map<RatingKey, Vote> entries;

  std::size_t size() const noexcept { return entries.size(); }
  const Vote* find(const RatingKey& key) const;
};

// Throws an integrity error naming every duplicated (query, system, metric, run).
ConsolidatedRatings consolidate_runs(const std::vector<RunRecord>& records,
                                     TiePolicy policy = TiePolicy::Lower);

enum class Pooling { Pooled, PerDirection };

const char* to_string(Pooling pooling);
Pooling parse_pooling(const std::string& text);

// +1 when a higher level is better, -1 when lower is better.
enum class Polarity { HigherIsBetter = 1, LowerIsBetter = -1 };

// Hallucination metrics default to LowerIsBetter.
Polarity default_polarity(const std::string& metric);

struct CompareOptions {
  double alpha = 0.05;
  Correction correction = Correction::BenjaminiHochberg;
  Pooling pooling = Pooling::Pooled;
  ZeroPolicy zero_policy = ZeroPolicy::Drop;
  TestMode mode = TestMode::Auto;
  std::map<std::string, Polarity> polarity;  // overrides default_polarity
};

enum class Verdict { ABetter, BBetter, NoDifference };
const char* to_string(Verdict verdict);

// "greater" tests whether B beats A on the metric's polarity-adjusted scale.
struct DirectionRow {
  std::string metric;
  Alternative direction = Alternative::Greater;
  double statistic = 0.0;
  double raw_p = 1.0;
  double adjusted_p = 1.0;
  bool rejected = false;
  bool no_signal = false;
  TestMode mode = TestMode::Approximate;
};

struct MetricVerdict {
  std::string metric;
  Polarity polarity = Polarity::HigherIsBetter;
  Verdict verdict = Verdict::NoDifference;
  std::size_t n_queries = 0;
};

struct ComparisonReport {
  std::string system_a;
  std::string system_b;
  std::vector<DirectionRow> rows;  // metric-major, greater before less
  std::vector<MetricVerdict> verdicts;
  std::size_t n_queries = 0;
  CompareOptions options;
};

ComparisonReport compare_systems(const ConsolidatedRatings& c, const std::string& system_a,
                                 const std::string& system_b,
                                 const std::vector<std::string>& metrics,
                                 const CompareOptions& options = {});

struct JudgeRow {
  std::string judge;
  JudgeProfile profile;
  std::array<bool, kProfileColumns> best{};
};

struct JudgeReport {
  std::vector<JudgeRow> rows;
};

// Marks the per-column maximum over defined cells; ties share the marker.
void mark_best(JudgeReport& report);

// Consolidates each judge's runs and profiles it against the gold levels over
// the shared (query, system, metric) keys.
JudgeReport evaluate_judges(const std::map<std::string, std::vector<RunRecord>>& judge_runs,
                            const ConsolidatedRatings& gold, int k,
                            const ProfileOptions& options = {});

// Every non-gold rater column of a matrix profiled against the gold column.
JudgeReport evaluate_judges(const RatingsMatrix& m, const std::string& gold_rater,
                            const ProfileOptions& options = {});

struct SweepRow {
  double share = 0.0;
  double observed_agreement = 0.0;
  MetricValue kappa;
  MetricValue alpha;
  MetricValue ac1;
  MetricValue ac2_linear;
  MetricValue ac2_quadratic;
};

// Item counts of the two-rater, two-category matrix built for one share.
struct SweepCounts {
  int both_dominant = 0;
  int dominant_minor = 0;
  int minor_dominant = 0;
  int both_minor = 0;
};

// Counts whose dominant-category marginal share is `share` and whose
// agreement rate is `observed`.
SweepCounts sweep_counts(double share, double observed, int n);
RatingsMatrix sweep_matrix(const SweepCounts& counts);

std::vector<SweepRow> prevalence_sweep(const std::vector<double>& shares, double observed,
                                       int n);

}  // namespace judgekit
