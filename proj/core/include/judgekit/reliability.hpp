#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "judgekit/ratings.hpp"

namespace judgekit {

enum class AgreementMethod { PercentAgreement, CohenKappa, KrippendorffAlpha, GwetAc };

enum class Difference { Nominal, Ordinal, Interval };

const char* to_string(AgreementMethod method);
const char* to_string(Difference difference);
Difference parse_difference(const std::string& text);

// Chance-corrected coefficient in the generic form
//   coefficient = (observed - expected) / (1 - expected).
// For alpha, observed = 1 - D_o and expected = 1 - D_e, with the squared
// differences scaled into [0, 1].
struct AgreementResult {
  double coefficient = 0.0;
  double observed_agreement = 0.0;
  double expected_agreement = 0.0;
  AgreementMethod method = AgreementMethod::PercentAgreement;
  WeightScheme weights = WeightScheme::Identity;
  std::optional<Difference> difference;
  std::size_t n_items_used = 0;
};

// Mean pairwise weight over rater pairs, averaged across co-rated items.
AgreementResult percent_agreement(const RatingsMatrix& m, WeightScheme w);

// Two raters, no missing cells. Use paired_columns first for paired deletion.
AgreementResult cohen_kappa(const RatingsMatrix& m, WeightScheme w);

// Coincidence-matrix alpha; tolerates missing cells and any rater count.
AgreementResult krippendorff_alpha(const RatingsMatrix& m, Difference difference);

// Gwet's AC1 (identity weights) and AC2 (linear / quadratic weights).
AgreementResult gwet_ac(const RatingsMatrix& m, WeightScheme w);

// Average ranks (1-based), ties share the mean of the positions they span.
std::vector<double> average_ranks(std::span<const double> values);

double spearman_rho(std::span<const double> x, std::span<const double> y);
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

// Convenience overloads for level vectors.
double spearman_rho(const std::vector<int>& x, const std::vector<int>& y);
double kendall_tau_b(const std::vector<int>& x, const std::vector<int>& y);

// One profile cell: a value, or the reason it is undefined.
struct MetricValue {
  std::optional<double> value;
  std::string undefined_reason;

  bool defined() const noexcept { return value.has_value(); }
};

enum class ProfileColumn {
  PercentAgreement,
  CohenKappa,
  KrippendorffAlpha,
  Ac2Linear,
  Ac2Quadratic,
  Spearman,
  Kendall,
};

inline constexpr std::size_t kProfileColumns = 7;
const char* column_title(ProfileColumn column);

struct ProfileOptions {
  WeightScheme agreement_weights = WeightScheme::Identity;
  Difference alpha_difference = Difference::Ordinal;
};

struct JudgeProfile {
  std::array<MetricValue, kProfileColumns> cells;
  std::size_t n_items = 0;

  const MetricValue& operator[](ProfileColumn c) const {
    return cells[static_cast<std::size_t>(c)];
  }
};

// Seven-metric agreement profile of a judge against gold over their overlap.
// A constant judge column carries no signal: kappa, alpha and both rank
// correlations are marked undefined for it.
JudgeProfile judge_profile(const std::vector<int>& judge, const std::vector<int>& gold, int k,
                           const ProfileOptions& options = {});

}  // namespace judgekit
