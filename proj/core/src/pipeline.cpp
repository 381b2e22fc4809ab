#include "judgekit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "judgekit/error.hpp"

namespace judgekit {

Vote majority_vote(const std::vector<int>& runs, TiePolicy policy) {
  if (runs.empty()) throw Error(ErrorKind::InvalidArgument, "majority vote over zero runs");
  std::map<int, int> counts;
  for (int r : runs) ++counts[r];
  Vote vote;
  vote.n_runs = static_cast<int>(runs.size());
  int modes = 0;
  for (const auto& [level, count] : counts) {
    if (count > vote.mode_count) {
      vote.mode_count = count;
      vote.level = level;
      modes = 1;
    } else if (count == vote.mode_count) {
      ++modes;
    }
  }
  // Ascending map order already yields the lowest mode.
  (void)policy;
  vote.tie = modes > 1;
  return vote;
}

const Vote* ConsolidatedRatings::find(const RatingKey& key) const {
  auto it = entries.find(key);
  return it == entries.end() ? nullptr : &it->second;
}

ConsolidatedRatings consolidate_runs(const std::vector<RunRecord>& records, TiePolicy policy) {
  std::map<RatingKey, std::map<int, int>> runs;
  std::set<std::string> duplicates;
  for (const RunRecord& r : records) {
    if (r.run < 1) {
      throw Error(ErrorKind::Integrity, "run index must be >= 1 (query '" + r.query_id + "', run " +
                                            std::to_string(r.run) + ")");
    }
    auto& per_key = runs[{r.query_id, r.system_id, r.metric}];
    if (!per_key.emplace(r.run, r.rating).second) {
      duplicates.insert("(" + r.query_id + ", " + r.system_id + ", " + r.metric + ", run " +
                        std::to_string(r.run) + ")");
    }
  }
  if (!duplicates.empty()) {
    std::string message = "duplicate run records:";
    for (const auto& d : duplicates) message += " " + d;
    throw Error(ErrorKind::Integrity, message);
  }
  ConsolidatedRatings out;
  std::vector<int> levels;
  for (const auto& [key, by_run] : runs) {
    levels.clear();
    for (const auto& [run, rating] : by_run) levels.push_back(rating);
    out.entries.emplace(key, majority_vote(levels, policy));
  }
  return out;
}

const char* to_string(Pooling pooling) {
  return pooling == Pooling::Pooled ? "pooled" : "per-direction";
}

Pooling parse_pooling(const std::string& text) {
  if (text == "pooled") return Pooling::Pooled;
  if (text == "per-direction") return Pooling::PerDirection;
  throw Error(ErrorKind::InvalidArgument, "unknown pooling '" + text + "'");
}

Polarity default_polarity(const std::string& metric) {
  return metric.find("Hallucination") != std::string::npos ? Polarity::LowerIsBetter
                                                            : Polarity::HigherIsBetter;
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::ABetter: return "A-better";
    case Verdict::BBetter: return "B-better";
    case Verdict::NoDifference: return "no-difference";
  }
  return "no-difference";
}

ComparisonReport compare_systems(const ConsolidatedRatings& c, const std::string& system_a,
                                 const std::string& system_b,
                                 const std::vector<std::string>& metrics,
                                 const CompareOptions& options) {
  if (metrics.empty()) throw Error(ErrorKind::InvalidArgument, "no metrics to compare");

  // metric -> query -> (a, b)
  std::map<std::string, std::map<std::string, std::pair<std::optional<int>, std::optional<int>>>>
      table;
  for (const auto& m : metrics) table[m];
  for (const auto& [key, vote] : c.entries) {
    auto it = table.find(key.metric);
    if (it == table.end()) continue;
    if (key.system_id == system_a) it->second[key.query_id].first = vote.level;
    if (key.system_id == system_b) it->second[key.query_id].second = vote.level;
  }

  std::vector<std::string> missing;
  for (const auto& m : metrics) {
    const auto& queries = table[m];
    if (queries.empty()) missing.push_back("metric '" + m + "' has no ratings");
    for (const auto& [q, pair] : queries) {
      if (!pair.first) missing.push_back("(" + q + ", " + m + ") missing system '" + system_a + "'");
      if (!pair.second) missing.push_back("(" + q + ", " + m + ") missing system '" + system_b + "'");
    }
  }
  if (!missing.empty()) {
    std::string message = "systems are not aligned:";
    for (std::size_t i = 0; i < missing.size(); ++i) {
      if (i == 20) {
        message += " ... (" + std::to_string(missing.size() - 20) + " more)";
        break;
      }
      message += " " + missing[i];
    }
    throw Error(ErrorKind::Alignment, message);
  }

  ComparisonReport report;
  report.system_a = system_a;
  report.system_b = system_b;
  report.options = options;
  std::set<std::string> all_queries;

  for (const auto& m : metrics) {
    auto found = options.polarity.find(m);
    const Polarity polarity = found != options.polarity.end() ? found->second : default_polarity(m);
    const double sign = static_cast<double>(static_cast<int>(polarity));
    std::vector<std::string> ids;
    std::vector<double> a, b;
    for (const auto& [q, pair] : table[m]) {
      ids.push_back(q);
      a.push_back(sign * *pair.first);
      b.push_back(sign * *pair.second);
      all_queries.insert(q);
    }
    const PairedSamples samples(ids, a, b);
    for (Alternative direction : {Alternative::Greater, Alternative::Less}) {
      DirectionRow row;
      row.metric = m;
      row.direction = direction;
      WilcoxonOptions wo;
      wo.alternative = direction;
      wo.zero_policy = options.zero_policy;
      wo.mode = options.mode;
      try {
        const TestResult t = wilcoxon_signed_rank(samples, wo);
        row.statistic = t.statistic;
        row.raw_p = t.p_value;
        row.mode = t.mode;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoSignal) throw;
        row.no_signal = true;
        row.raw_p = 1.0;
      }
      report.rows.push_back(row);
    }
    report.verdicts.push_back({m, polarity, Verdict::NoDifference, ids.size()});
  }
  report.n_queries = all_queries.size();

  auto adjust_family = [&](const std::vector<std::size_t>& members) {
    std::vector<double> raw;
    for (std::size_t i : members) raw.push_back(report.rows[i].raw_p);
    const CorrectionResult cr = adjust_pvalues(raw, options.correction, options.alpha);
    for (std::size_t j = 0; j < members.size(); ++j) {
      report.rows[members[j]].adjusted_p = cr.adjusted[j];
      report.rows[members[j]].rejected = cr.rejected[j];
    }
  };
  if (options.pooling == Pooling::Pooled) {
    std::vector<std::size_t> all(report.rows.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    adjust_family(all);
  } else {
    std::vector<std::size_t> greater, less;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      (report.rows[i].direction == Alternative::Greater ? greater : less).push_back(i);
    }
    adjust_family(greater);
    adjust_family(less);
  }

  for (std::size_t m = 0; m < report.verdicts.size(); ++m) {
    const DirectionRow& greater = report.rows[2 * m];
    const DirectionRow& less = report.rows[2 * m + 1];
    if (greater.rejected && (!less.rejected || greater.adjusted_p <= less.adjusted_p)) {
      report.verdicts[m].verdict = Verdict::BBetter;
    } else if (less.rejected) {
      report.verdicts[m].verdict = Verdict::ABetter;
    }
  }
  return report;
}

void mark_best(JudgeReport& report) {
  for (std::size_t col = 0; col < kProfileColumns; ++col) {
    std::optional<double> best;
    for (const auto& row : report.rows) {
      const auto& v = row.profile.cells[col].value;
      if (v && (!best || *v > *best)) best = v;
    }
    for (auto& row : report.rows) {
      const auto& v = row.profile.cells[col].value;
      row.best[col] = best && v && *v == *best;
    }
  }
}

namespace {

JudgeRow profile_row(const std::string& judge, const std::vector<int>& levels,
                     const std::vector<int>& gold, int k, const ProfileOptions& options) {
  JudgeRow row;
  row.judge = judge;
  row.profile.n_items = levels.size();
  try {
    row.profile = judge_profile(levels, gold, k, options);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientData) throw;
    for (auto& cell : row.profile.cells) cell.undefined_reason = "insufficient-data";
  }
  return row;
}

}  // namespace

JudgeReport evaluate_judges(const std::map<std::string, std::vector<RunRecord>>& judge_runs,
                            const ConsolidatedRatings& gold, int k,
                            const ProfileOptions& options) {
  JudgeReport report;
  for (const auto& [judge, runs] : judge_runs) {
    const ConsolidatedRatings consolidated = consolidate_runs(runs);
    std::vector<int> levels, gold_levels;
    for (const auto& [key, vote] : consolidated.entries) {
      if (const Vote* g = gold.find(key)) {
        levels.push_back(vote.level);
        gold_levels.push_back(g->level);
      }
    }
    report.rows.push_back(profile_row(judge, levels, gold_levels, k, options));
  }
  mark_best(report);
  return report;
}

JudgeReport evaluate_judges(const RatingsMatrix& m, const std::string& gold_rater,
                            const ProfileOptions& options) {
  if (!m.rater_index(gold_rater)) {
    throw Error(ErrorKind::InvalidArgument, "unknown gold rater '" + gold_rater + "'");
  }
  JudgeReport report;
  for (const auto& judge : m.raters()) {
    if (judge == gold_rater) continue;
    std::vector<int> levels, gold_levels;
    try {
      PairedLevels p = paired_columns(m, judge, gold_rater);
      levels = std::move(p.a);
      gold_levels = std::move(p.b);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientData) throw;
    }
    report.rows.push_back(profile_row(judge, levels, gold_levels, m.k(), options));
  }
  mark_best(report);
  return report;
}

SweepCounts sweep_counts(double share, double observed, int n) {
  if (!(share >= 0.5 && share < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "dominant share must lie in [0.5, 1)");
  }
  if (!(observed > 0.0 && observed <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "observed agreement must lie in (0, 1]");
  }
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "sweep needs at least one item");
  const auto disagreements = static_cast<int>(std::lround(n * (1.0 - observed)));
  SweepCounts c;
  c.both_dominant = static_cast<int>(std::lround(n * (share - (1.0 - observed) / 2.0)));
  c.dominant_minor = (disagreements + 1) / 2;
  c.minor_dominant = disagreements / 2;
  c.both_minor = n - c.both_dominant - disagreements;
  if (c.both_dominant < 0 || c.both_minor < 0) {
    throw Error(ErrorKind::InvalidArgument,
                "infeasible sweep point: share " + std::to_string(share) +
                    " cannot be reached with observed agreement " + std::to_string(observed));
  }
  const double achieved = static_cast<double>(c.both_dominant + c.both_minor) / n;
  if (std::abs(achieved - observed) > 0.02) {
    throw Error(ErrorKind::InvalidArgument,
                "too few items: rounding moves observed agreement to " + std::to_string(achieved));
  }
  return c;
}

RatingsMatrix sweep_matrix(const SweepCounts& counts) {
  std::vector<std::vector<Cell>> rows;
  auto add = [&](int count, int a, int b) {
    for (int i = 0; i < count; ++i) rows.push_back({a, b});
  };
  add(counts.both_dominant, 1, 1);
  add(counts.dominant_minor, 1, 2);
  add(counts.minor_dominant, 2, 1);
  add(counts.both_minor, 2, 2);
  return RatingsMatrix::from_rows(rows, 2);
}

std::vector<SweepRow> prevalence_sweep(const std::vector<double>& shares, double observed, int n) {
  std::vector<SweepRow> out;
  for (double share : shares) {
    const SweepCounts counts = sweep_counts(share, observed, n);
    const RatingsMatrix m = sweep_matrix(counts);
    SweepRow row;
    row.share = share;
    row.observed_agreement = static_cast<double>(counts.both_dominant + counts.both_minor) / n;
    auto cell = [&](auto&& compute) {
      MetricValue v;
      try {
        v.value = compute().coefficient;
      } catch (const Error& e) {
        v.undefined_reason = std::string(to_string(e.kind()));
      }
      return v;
    };
    row.kappa = cell([&] { return cohen_kappa(m, WeightScheme::Identity); });
    row.alpha = cell([&] { return krippendorff_alpha(m, Difference::Nominal); });
    row.ac1 = cell([&] { return gwet_ac(m, WeightScheme::Identity); });
    row.ac2_linear = cell([&] { return gwet_ac(m, WeightScheme::Linear); });
    row.ac2_quadratic = cell([&] { return gwet_ac(m, WeightScheme::Quadratic); });
    out.push_back(row);
  }
  return out;
}

}  // namespace judgekit
