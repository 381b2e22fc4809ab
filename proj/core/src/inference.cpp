#include "judgekit/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include "judgekit/error.hpp"
#include "judgekit/reliability.hpp"

namespace judgekit {

namespace {

constexpr std::size_t kMannWhitneyExactCeiling = 100;
constexpr std::size_t kMannWhitneyAutoExact = 50;
constexpr int kSignTestIntegerCeiling = 60;

bool has_ties(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return std::adjacent_find(values.begin(), values.end()) != values.end();
}

// Tail probabilities for a normal approximation with continuity correction.
// `deviation` is statistic - mean.
double approximate_p(double deviation, double sd, Alternative alternative) {
  if (sd <= 0.0) return 1.0;
  switch (alternative) {
    case Alternative::Greater:
      return normal_upper_tail((deviation - 0.5) / sd);
    case Alternative::Less:
      return normal_upper_tail((-deviation - 0.5) / sd);
    case Alternative::TwoSided: {
      const double corrected = std::max(std::abs(deviation) - 0.5, 0.0);
      return std::min(1.0, 2.0 * normal_upper_tail(corrected / sd));
    }
  }
  return 1.0;
}

double combine_tails(double upper, double lower, Alternative alternative) {
  switch (alternative) {
    case Alternative::Greater: return upper;
    case Alternative::Less: return lower;
    case Alternative::TwoSided: return std::min(1.0, 2.0 * std::min(upper, lower));
  }
  return 1.0;
}

// P(X >= k) for X ~ Binomial(n, 1/2).
double binomial_upper(int n, int k) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (n <= kSignTestIntegerCeiling) {
    std::uint64_t coefficient = 1;  // C(n, j)
    std::uint64_t tail = 0;
    for (int j = 0; j <= n; ++j) {
      if (j > 0) coefficient = coefficient * static_cast<std::uint64_t>(n - j + 1) / j;
      if (j >= k) tail += coefficient;
    }
    return std::ldexp(static_cast<double>(tail), -n);
  }
  const boost::math::binomial_distribution<double> dist(n, 0.5);
  return boost::math::cdf(boost::math::complement(dist, k - 1));
}

void require_probability_input(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "p-value outside [0, 1]: " + std::to_string(p));
  }
}

}  // namespace

const char* to_string(Alternative alternative) {
  switch (alternative) {
    case Alternative::TwoSided: return "two-sided";
    case Alternative::Greater: return "greater";
    case Alternative::Less: return "less";
  }
  return "two-sided";
}

const char* to_string(TestMode mode) {
  switch (mode) {
    case TestMode::Exact: return "exact";
    case TestMode::Approximate: return "approximate";
    case TestMode::Auto: return "auto";
  }
  return "auto";
}

const char* to_string(ZeroPolicy policy) {
  return policy == ZeroPolicy::Drop ? "drop" : "pratt";
}

const char* to_string(Correction correction) {
  switch (correction) {
    case Correction::Bonferroni: return "bonferroni";
    case Correction::Holm: return "holm";
    case Correction::BenjaminiHochberg: return "bh";
  }
  return "bh";
}

Alternative parse_alternative(const std::string& text) {
  if (text == "two-sided") return Alternative::TwoSided;
  if (text == "greater") return Alternative::Greater;
  if (text == "less") return Alternative::Less;
  throw Error(ErrorKind::InvalidArgument, "unknown alternative '" + text + "'");
}

ZeroPolicy parse_zero_policy(const std::string& text) {
  if (text == "drop") return ZeroPolicy::Drop;
  if (text == "pratt") return ZeroPolicy::Pratt;
  throw Error(ErrorKind::InvalidArgument, "unknown zero policy '" + text + "'");
}

Correction parse_correction(const std::string& text) {
  if (text == "bonferroni") return Correction::Bonferroni;
  if (text == "holm") return Correction::Holm;
  if (text == "bh") return Correction::BenjaminiHochberg;
  throw Error(ErrorKind::InvalidArgument, "unknown correction '" + text + "'");
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

PairedSamples::PairedSamples(std::vector<double> a_, std::vector<double> b_)
    : a(std::move(a_)), b(std::move(b_)) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::Alignment, "paired samples differ in length");
  }
  if (a.empty()) throw Error(ErrorKind::InsufficientData, "paired samples are empty");
  for (std::size_t i = 0; i < a.size(); ++i) query_ids.push_back(std::to_string(i));
}

PairedSamples::PairedSamples(std::vector<std::string> ids, std::vector<double> a_,
                             std::vector<double> b_)
    : query_ids(std::move(ids)), a(std::move(a_)), b(std::move(b_)) {
  if (a.size() != b.size() || query_ids.size() != a.size()) {
    throw Error(ErrorKind::Alignment, "paired samples differ in length");
  }
  if (a.empty()) throw Error(ErrorKind::InsufficientData, "paired samples are empty");
}

std::vector<double> PairedSamples::differences() const {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = b[i] - a[i];
  return d;
}

std::vector<double> signed_rank_null_distribution(std::span<const int> ranks) {
  const int total = std::accumulate(ranks.begin(), ranks.end(), 0);
  std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
  counts[0] = 1.0;
  int reach = 0;
  for (int r : ranks) {
    reach += r;
    for (int w = reach; w >= r; --w) counts[w] += counts[w - r];
  }
  const int n = static_cast<int>(ranks.size());
  for (double& c : counts) c = std::ldexp(c, -n);
  return counts;
}

TestResult wilcoxon_signed_rank(const PairedSamples& s, const WilcoxonOptions& options) {
  const std::vector<double> d = s.differences();
  std::vector<double> magnitudes;
  std::vector<int> signs;
  for (double v : d) {
    if (v == 0.0 && options.zero_policy == ZeroPolicy::Drop) continue;
    magnitudes.push_back(std::abs(v));
    signs.push_back(v > 0.0 ? 1 : (v < 0.0 ? -1 : 0));
  }
  const auto nonzero =
      static_cast<std::size_t>(std::count_if(signs.begin(), signs.end(), [](int v) { return v != 0; }));
  if (nonzero == 0) {
    throw Error(ErrorKind::NoSignal, "wilcoxon: every paired difference is zero");
  }

  const std::vector<double> ranks = average_ranks(magnitudes);
  std::vector<double> signed_ranks;
  std::vector<double> nonzero_magnitudes;
  double w_plus = 0.0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (signs[i] == 0) continue;
    signed_ranks.push_back(ranks[i]);
    nonzero_magnitudes.push_back(magnitudes[i]);
    if (signs[i] > 0) w_plus += ranks[i];
  }
  const bool tied = has_ties(nonzero_magnitudes);

  TestResult result;
  result.method = "wilcoxon-signed-rank";
  result.alternative = options.alternative;
  result.statistic = w_plus;
  result.n_effective = nonzero;

  bool exact = false;
  switch (options.mode) {
    case TestMode::Exact:
      exact = !tied;
      result.mode_downgraded = tied;
      break;
    case TestMode::Approximate: exact = false; break;
    case TestMode::Auto: exact = !tied && nonzero <= options.exact_threshold; break;
  }

  if (exact) {
    // Untied nonzero magnitudes have integer ranks, even when Pratt zeros share a mean rank.
    std::vector<int> int_ranks(signed_ranks.size());
    for (std::size_t i = 0; i < signed_ranks.size(); ++i) {
      int_ranks[i] = static_cast<int>(signed_ranks[i]);
    }
    const std::vector<double> null = signed_rank_null_distribution(int_ranks);
    const auto observed = static_cast<std::size_t>(w_plus);
    double upper = 0.0, lower = 0.0;
    for (std::size_t w = 0; w < null.size(); ++w) {
      if (w >= observed) upper += null[w];
      if (w <= observed) lower += null[w];
    }
    result.mode = TestMode::Exact;
    result.p_value = combine_tails(upper, lower, options.alternative);
  } else {
    double sum = 0.0, sum_sq = 0.0;
    for (double r : signed_ranks) {
      sum += r;
      sum_sq += r * r;
    }
    const double mean = sum / 2.0;
    const double sd = std::sqrt(sum_sq / 4.0);
    result.mode = TestMode::Approximate;
    result.p_value = approximate_p(w_plus - mean, sd, options.alternative);
  }
  result.p_value = std::clamp(result.p_value, 0.0, 1.0);
  return result;
}

TestResult sign_test(const PairedSamples& s, Alternative alternative) {
  int positive = 0, negative = 0;
  for (double v : s.differences()) {
    if (v > 0.0) ++positive;
    if (v < 0.0) ++negative;
  }
  const int n = positive + negative;
  if (n == 0) throw Error(ErrorKind::NoSignal, "sign test: every paired difference is zero");
  const double upper = binomial_upper(n, positive);
  const double lower = binomial_upper(n, negative);  // P(X <= positive) by symmetry
  TestResult result;
  result.method = "sign-test";
  result.alternative = alternative;
  result.statistic = positive;
  result.mode = TestMode::Exact;
  result.n_effective = static_cast<std::size_t>(n);
  result.p_value = std::clamp(combine_tails(upper, lower, alternative), 0.0, 1.0);
  return result;
}

TestResult mann_whitney_u(std::span<const double> x, std::span<const double> y,
                          Alternative alternative, TestMode mode) {
  if (x.empty() || y.empty()) {
    throw Error(ErrorKind::InsufficientData, "mann-whitney: both samples must be nonempty");
  }
  const std::size_t nx = x.size(), ny = y.size(), total = nx + ny;

  double u_x = 0.0, u_y = 0.0;
  for (double xi : x) {
    for (double yj : y) {
      if (xi > yj) u_x += 1.0;
      else if (xi < yj) u_y += 1.0;
      else {
        u_x += 0.5;
        u_y += 0.5;
      }
    }
  }

  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  const std::vector<double> ranks = average_ranks(pooled);
  const bool tied = has_ties(pooled);

  TestResult result;
  result.method = "mann-whitney-u";
  result.alternative = alternative;
  result.statistic = u_x;
  result.n_effective = total;

  bool exact = false;
  switch (mode) {
    case TestMode::Exact:
      exact = total <= kMannWhitneyExactCeiling;
      result.mode_downgraded = !exact;
      break;
    case TestMode::Approximate: exact = false; break;
    case TestMode::Auto: exact = !tied && total <= kMannWhitneyAutoExact; break;
  }

  if (exact) {
    // Doubled mid-ranks are integers; count subsets of size nx by doubled rank sum.
    std::vector<int> doubled(total);
    int max_sum = 0;
    for (std::size_t i = 0; i < total; ++i) {
      doubled[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
      max_sum += doubled[i];
    }
    const std::size_t width = static_cast<std::size_t>(max_sum) + 1;
    std::vector<double> ways((nx + 1) * width, 0.0);
    ways[0] = 1.0;
    for (std::size_t item = 0; item < total; ++item) {
      const int r = doubled[item];
      for (std::size_t j = std::min(item + 1, nx); j >= 1; --j) {
        double* dst = &ways[j * width];
        const double* src = &ways[(j - 1) * width];
        for (std::size_t s = width - 1; s >= static_cast<std::size_t>(r); --s) dst[s] += src[s - r];
      }
    }
    int observed = 0;
    for (std::size_t i = 0; i < nx; ++i) observed += doubled[i];
    double count_upper = 0.0, count_lower = 0.0, count_all = 0.0;
    const double* row = &ways[nx * width];
    for (std::size_t s = 0; s < width; ++s) {
      count_all += row[s];
      if (static_cast<int>(s) >= observed) count_upper += row[s];
      if (static_cast<int>(s) <= observed) count_lower += row[s];
    }
    result.mode = TestMode::Exact;
    result.p_value = combine_tails(count_upper / count_all, count_lower / count_all, alternative);
  } else {
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i + 1;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      const auto t = static_cast<double>(j - i);
      tie_term += t * t * t - t;
      i = j;
    }
    const double n = static_cast<double>(total);
    const double prod = static_cast<double>(nx) * static_cast<double>(ny);
    const double variance = total > 1 ? prod / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0))) : 0.0;
    result.mode = TestMode::Approximate;
    result.p_value = approximate_p(u_x - prod / 2.0, std::sqrt(std::max(variance, 0.0)), alternative);
  }
  result.p_value = std::clamp(result.p_value, 0.0, 1.0);
  return result;
}

TestResult friedman_test(const std::vector<std::vector<std::optional<double>>>& scores) {
  const std::size_t k = scores.size();
  if (k < 3) {
    throw Error(ErrorKind::UnsupportedDesign,
                "friedman test needs at least 3 systems; use a paired test for 2");
  }
  const std::size_t n = scores.front().size();
  for (const auto& row : scores) {
    if (row.size() != n) throw Error(ErrorKind::Alignment, "friedman: ragged score matrix");
  }
  if (n < 2) throw Error(ErrorKind::InsufficientData, "friedman test needs at least 2 queries");

  std::vector<double> rank_sums(k, 0.0);
  double tie_term = 0.0;
  std::vector<double> column(k);
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t s = 0; s < k; ++s) {
      if (!scores[s][q]) {
        throw Error(ErrorKind::MissingData, "friedman: missing score for system " +
                                                std::to_string(s) + ", query " + std::to_string(q));
      }
      column[s] = *scores[s][q];
    }
    const std::vector<double> ranks = average_ranks(column);
    for (std::size_t s = 0; s < k; ++s) rank_sums[s] += ranks[s];
    std::vector<double> sorted = column;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < k;) {
      std::size_t j = i + 1;
      while (j < k && sorted[j] == sorted[i]) ++j;
      const auto t = static_cast<double>(j - i);
      tie_term += t * t * t - t;
      i = j;
    }
  }

  const double kd = static_cast<double>(k), nd = static_cast<double>(n);
  double sum_sq = 0.0;
  for (double r : rank_sums) sum_sq += r * r;
  const double uncorrected = 12.0 * sum_sq / (nd * kd * (kd + 1.0)) - 3.0 * nd * (kd + 1.0);
  const double correction = 1.0 - tie_term / (nd * (kd * kd * kd - kd));

  TestResult result;
  result.method = "friedman";
  result.alternative = Alternative::TwoSided;
  result.mode = TestMode::Approximate;
  result.n_effective = n;
  if (correction <= 0.0) {
    result.statistic = 0.0;
    result.p_value = 1.0;
    return result;
  }
  result.statistic = std::max(0.0, uncorrected / correction);
  const boost::math::chi_squared_distribution<double> chi2(kd - 1.0);
  result.p_value = std::clamp(boost::math::cdf(boost::math::complement(chi2, result.statistic)), 0.0, 1.0);
  return result;
}

CorrectionResult adjust_pvalues(std::span<const double> p, Correction method, double alpha) {
  if (p.empty()) throw Error(ErrorKind::InvalidArgument, "no p-values to adjust");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
  }
  for (double v : p) require_probability_input(v);

  const std::size_t m = p.size();
  const auto md = static_cast<double>(m);
  CorrectionResult result;
  result.raw.assign(p.begin(), p.end());
  result.adjusted.assign(m, 0.0);
  result.method = method;
  result.alpha = alpha;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });

  switch (method) {
    case Correction::Bonferroni:
      for (std::size_t i = 0; i < m; ++i) result.adjusted[i] = std::min(1.0, md * p[i]);
      break;
    case Correction::Holm: {
      double running = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double factor = static_cast<double>(m - j);
        running = std::max(running, std::min(1.0, factor * p[order[j]]));
        result.adjusted[order[j]] = running;
      }
      break;
    }
    case Correction::BenjaminiHochberg: {
      double running = 1.0;
      for (std::size_t j = m; j-- > 0;) {
        const double pj = p[order[j]];
        const double scaled = j + 1 == m ? pj : md * pj / static_cast<double>(j + 1);
        running = std::min(running, std::min(1.0, scaled));
        result.adjusted[order[j]] = running;
      }
      break;
    }
  }
  result.rejected.resize(m);
  for (std::size_t i = 0; i < m; ++i) result.rejected[i] = result.adjusted[i] <= alpha;
  return result;
}

double sample_skewness(std::span<const double> x) {
  if (x.size() < 3) {
    throw Error(ErrorKind::InsufficientData, "skewness needs at least 3 observations");
  }
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) {
    throw Error(ErrorKind::DegenerateDistribution, "skewness of a constant sample is undefined");
  }
  const auto n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  const double g1 = m3 / std::pow(m2, 1.5);
  return g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
}

}  // namespace judgekit
