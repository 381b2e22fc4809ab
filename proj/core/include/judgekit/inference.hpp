#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace judgekit {

enum class Alternative { TwoSided, Greater, Less };
enum class TestMode { Exact, Approximate, Auto };
enum class ZeroPolicy { Drop, Pratt };
enum class Correction { Bonferroni, Holm, BenjaminiHochberg };

const char* to_string(Alternative alternative);
const char* to_string(TestMode mode);
const char* to_string(ZeroPolicy policy);
const char* to_string(Correction correction);
Alternative parse_alternative(const std::string& text);
ZeroPolicy parse_zero_policy(const std::string& text);
Correction parse_correction(const std::string& text);

// Per-query scores of two systems, aligned by position. Differences are b - a.
struct PairedSamples {
  std::vector<std::string> query_ids;
  std::vector<double> a;
  std::vector<double> b;

  PairedSamples(std::vector<double> a, std::vector<double> b);
  PairedSamples(std::vector<std::string> query_ids, std::vector<double> a, std::vector<double> b);

  std::size_t size() const noexcept { return a.size(); }
  std::vector<double> differences() const;
};

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  Alternative alternative = Alternative::TwoSided;
  std::string method;
  TestMode mode = TestMode::Approximate;  // Exact or Approximate, never Auto
  bool mode_downgraded = false;           // exact was requested but ties forced the approximation
  std::size_t n_effective = 0;
};

struct WilcoxonOptions {
  Alternative alternative = Alternative::TwoSided;
  ZeroPolicy zero_policy = ZeroPolicy::Drop;
  TestMode mode = TestMode::Auto;
  std::size_t exact_threshold = 25;  // Auto uses exact up to this many nonzero differences
};

// Statistic is W+, the rank sum of positive differences.
TestResult wilcoxon_signed_rank(const PairedSamples& s, const WilcoxonOptions& options = {});

// Exact null distribution of a signed-rank sum: P(W+ = w) for integer ranks,
// obtained by counting all 2^n sign assignments. Index is w.
std::vector<double> signed_rank_null_distribution(std::span<const int> ranks);

// Binomial test on the count of positive differences; zeros are dropped.
TestResult sign_test(const PairedSamples& s, Alternative alternative);

// Statistic is U_x = #{x_i > y_j} + 0.5 #{x_i == y_j}. "greater" means x
// tends to exceed y.
TestResult mann_whitney_u(std::span<const double> x, std::span<const double> y,
                          Alternative alternative, TestMode mode = TestMode::Auto);

// Rows are systems, columns are queries. Missing cells are rejected.
TestResult friedman_test(const std::vector<std::vector<std::optional<double>>>& scores);

struct CorrectionResult {
  std::vector<double> raw;
  std::vector<double> adjusted;
  Correction method = Correction::BenjaminiHochberg;
  double alpha = 0.05;
  std::vector<bool> rejected;
};

CorrectionResult adjust_pvalues(std::span<const double> p, Correction method, double alpha = 0.05);

// Adjusted Fisher-Pearson standardized third moment, G1.
double sample_skewness(std::span<const double> x);

// Standard normal upper tail, P(Z >= z).
double normal_upper_tail(double z);

}  // namespace judgekit
