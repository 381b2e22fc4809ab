#include "judgekit/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "judgekit/error.hpp"

namespace judgekit {

namespace {

// 1 - expected agreement at or below this counts as a vanishing chance term.
constexpr double kDegenerateEps = 1e-12;

AgreementResult generic_form(AgreementMethod method, WeightScheme w, double observed,
                             double expected, std::size_t used) {
  if (1.0 - expected <= kDegenerateEps) {
    throw Error(ErrorKind::DegenerateDistribution,
                std::string(to_string(method)) +
                    ": chance agreement is 1, coefficient undefined (single-category ratings)");
  }
  AgreementResult r;
  r.method = method;
  r.weights = w;
  r.observed_agreement = observed;
  r.expected_agreement = expected;
  r.coefficient = (observed - expected) / (1.0 - expected);
  r.n_items_used = used;
  return r;
}

void require_rank_inputs(std::span<const double> x, std::span<const double> y,
                         std::size_t min_n, const char* name) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::InvalidArgument, std::string(name) + ": vectors differ in length");
  }
  if (x.size() < min_n) {
    throw Error(ErrorKind::InsufficientData, std::string(name) + ": needs at least " +
                                                 std::to_string(min_n) + " observations");
  }
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y)) {
    throw Error(ErrorKind::UndefinedCorrelation,
                std::string(name) + ": a constant vector has no ranking");
  }
}

// Merge sort on `v`, returning the number of strictly inverted pairs.
std::int64_t count_inversions(std::vector<double>& v, std::vector<double>& scratch,
                              std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = count_inversions(v, scratch, lo, mid) + count_inversions(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, out = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      scratch[out++] = v[j++];
    } else {
      scratch[out++] = v[i++];
    }
  }
  while (i < mid) scratch[out++] = v[i++];
  while (j < hi) scratch[out++] = v[j++];
  std::copy(scratch.begin() + lo, scratch.begin() + hi, v.begin() + lo);
  return swaps;
}

std::int64_t tied_pairs_in_sorted(const std::vector<double>& v) {
  std::int64_t ties = 0;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i + 1;
    while (j < v.size() && v[j] == v[i]) ++j;
    const auto t = static_cast<std::int64_t>(j - i);
    ties += t * (t - 1) / 2;
    i = j;
  }
  return ties;
}

}  // namespace

const char* to_string(AgreementMethod method) {
  switch (method) {
    case AgreementMethod::PercentAgreement: return "percent-agreement";
    case AgreementMethod::CohenKappa: return "cohen-kappa";
    case AgreementMethod::KrippendorffAlpha: return "krippendorff-alpha";
    case AgreementMethod::GwetAc: return "gwet-ac";
  }
  return "unknown";
}

const char* to_string(Difference difference) {
  switch (difference) {
    case Difference::Nominal: return "nominal";
    case Difference::Ordinal: return "ordinal";
    case Difference::Interval: return "interval";
  }
  return "nominal";
}

Difference parse_difference(const std::string& text) {
  if (text == "nominal") return Difference::Nominal;
  if (text == "ordinal") return Difference::Ordinal;
  if (text == "interval") return Difference::Interval;
  throw Error(ErrorKind::InvalidArgument, "unknown difference function '" + text + "'");
}

AgreementResult percent_agreement(const RatingsMatrix& m, WeightScheme w) {
  require_valid(m);
  const WeightMatrix weights(w, m.k());
  double total = 0.0;
  std::size_t used = 0;
  std::vector<int> levels;
  for (std::size_t i = 0; i < m.n_items(); ++i) {
    levels.clear();
    for (std::size_t r = 0; r < m.n_raters(); ++r) {
      if (const Cell& c = m.at(i, r)) levels.push_back(*c);
    }
    if (levels.size() < 2) continue;
    double pair_sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < levels.size(); ++a) {
      for (std::size_t b = a + 1; b < levels.size(); ++b) {
        pair_sum += weights(levels[a], levels[b]);
        ++pairs;
      }
    }
    total += pair_sum / static_cast<double>(pairs);
    ++used;
  }
  AgreementResult r;
  r.method = AgreementMethod::PercentAgreement;
  r.weights = w;
  r.observed_agreement = total / static_cast<double>(used);
  r.expected_agreement = 0.0;
  r.coefficient = r.observed_agreement;
  r.n_items_used = used;
  return r;
}

AgreementResult cohen_kappa(const RatingsMatrix& m, WeightScheme w) {
  if (m.n_raters() != 2) {
    throw Error(ErrorKind::UnsupportedDesign, "cohen kappa needs exactly 2 raters, got " +
                                                  std::to_string(m.n_raters()));
  }
  for (std::size_t i = 0; i < m.n_items(); ++i) {
    if (m.present_count(i) != 2) {
      throw Error(ErrorKind::MissingData, "cohen kappa does not tolerate missing ratings (item '" +
                                              m.items()[i] + "'); pair the columns first");
    }
  }
  require_valid(m);
  const int k = m.k();
  const WeightMatrix weights(w, k);
  const auto n = static_cast<double>(m.n_items());
  std::vector<double> pa(k, 0.0), pb(k, 0.0);
  double observed = 0.0;
  for (std::size_t i = 0; i < m.n_items(); ++i) {
    const int a = *m.at(i, 0);
    const int b = *m.at(i, 1);
    observed += weights(a, b);
    pa[a - 1] += 1.0;
    pb[b - 1] += 1.0;
  }
  observed /= n;
  double expected = 0.0;
  for (int a = 1; a <= k; ++a) {
    for (int b = 1; b <= k; ++b) expected += weights(a, b) * (pa[a - 1] / n) * (pb[b - 1] / n);
  }
  return generic_form(AgreementMethod::CohenKappa, w, observed, expected, m.n_items());
}

AgreementResult krippendorff_alpha(const RatingsMatrix& m, Difference difference) {
  require_valid(m);
  const int k = m.k();
  const auto K = static_cast<std::size_t>(k);
  std::vector<double> coincidence(K * K, 0.0);
  std::size_t used = 0;
  for (std::size_t i = 0; i < m.n_items(); ++i) {
    const int present = m.present_count(i);
    if (present < 2) continue;
    ++used;
    const std::vector<int> counts = m.category_counts(i);
    for (std::size_t c = 0; c < K; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t l = 0; l < K; ++l) {
        const int pairs = counts[c] * (counts[l] - (c == l ? 1 : 0));
        coincidence[c * K + l] += static_cast<double>(pairs) / (present - 1);
      }
    }
  }

  std::vector<double> marginal(K, 0.0);
  for (std::size_t c = 0; c < K; ++c) {
    for (std::size_t l = 0; l < K; ++l) marginal[c] += coincidence[c * K + l];
  }
  const double total = std::accumulate(marginal.begin(), marginal.end(), 0.0);

  std::vector<double> delta2(K * K, 0.0);
  for (std::size_t c = 0; c < K; ++c) {
    for (std::size_t l = 0; l < K; ++l) {
      double d = 0.0;
      switch (difference) {
        case Difference::Nominal: d = c == l ? 0.0 : 1.0; break;
        case Difference::Interval: {
          const double diff = static_cast<double>(c) - static_cast<double>(l);
          d = diff * diff;
          break;
        }
        case Difference::Ordinal: {
          const std::size_t lo = std::min(c, l), hi = std::max(c, l);
          double span = 0.0;
          for (std::size_t g = lo; g <= hi; ++g) span += marginal[g];
          span -= (marginal[c] + marginal[l]) / 2.0;
          d = span * span;
          break;
        }
      }
      delta2[c * K + l] = d;
    }
  }
  const double scale = *std::max_element(delta2.begin(), delta2.end());

  double observed_dis = 0.0, expected_dis = 0.0;
  if (scale > 0.0) {
    for (std::size_t c = 0; c < K; ++c) {
      for (std::size_t l = 0; l < K; ++l) {
        const double d = delta2[c * K + l] / scale;
        observed_dis += coincidence[c * K + l] * d;
        expected_dis += marginal[c] * marginal[l] * d;
      }
    }
    observed_dis /= total;
    expected_dis /= total * (total - 1.0);
  }
  if (expected_dis <= kDegenerateEps) {
    throw Error(ErrorKind::DegenerateDistribution,
                "krippendorff alpha: expected disagreement is 0 (all ratings in one category)");
  }
  AgreementResult r;
  r.method = AgreementMethod::KrippendorffAlpha;
  r.difference = difference;
  r.observed_agreement = 1.0 - observed_dis;
  r.expected_agreement = 1.0 - expected_dis;
  r.coefficient = 1.0 - observed_dis / expected_dis;
  r.n_items_used = used;
  return r;
}

AgreementResult gwet_ac(const RatingsMatrix& m, WeightScheme w) {
  const std::vector<double> pi = marginal_proportions(m);  // validates
  const int k = m.k();
  const WeightMatrix weights(w, k);

  double observed = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < m.n_items(); ++i) {
    const int present = m.present_count(i);
    if (present < 2) continue;
    ++used;
    const std::vector<int> counts = m.category_counts(i);
    double item_sum = 0.0;
    for (int a = 1; a <= k; ++a) {
      if (counts[a - 1] == 0) continue;
      double weighted = 0.0;
      for (int b = 1; b <= k; ++b) weighted += weights(a, b) * counts[b - 1];
      item_sum += counts[a - 1] * (weighted - 1.0);
    }
    observed += item_sum / (static_cast<double>(present) * (present - 1));
  }
  observed /= static_cast<double>(used);

  double spread = 0.0;
  for (double p : pi) spread += p * (1.0 - p);
  const double expected = weights.total() / (static_cast<double>(k) * (k - 1)) * spread;
  return generic_form(AgreementMethod::GwetAc, w, observed, expected, used);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = rank;
    i = j;
  }
  return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  require_rank_inputs(x, y, 3, "spearman");
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const auto n = static_cast<double>(rx.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean, dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  require_rank_inputs(x, y, 2, "kendall");
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
  });

  const auto total = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  std::int64_t x_ties = 0, joint_ties = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && x[order[j]] == x[order[i]]) ++j;
    const auto t = static_cast<std::int64_t>(j - i);
    x_ties += t * (t - 1) / 2;
    std::size_t s = i;
    while (s < j) {
      std::size_t e = s + 1;
      while (e < j && y[order[e]] == y[order[s]]) ++e;
      const auto u = static_cast<std::int64_t>(e - s);
      joint_ties += u * (u - 1) / 2;
      s = e;
    }
    i = j;
  }

  std::vector<double> ys(n), scratch(n);
  for (std::size_t t = 0; t < n; ++t) ys[t] = y[order[t]];
  const std::int64_t swaps = count_inversions(ys, scratch, 0, n);
  const std::int64_t y_ties = tied_pairs_in_sorted(ys);

  const std::int64_t concordant_minus_discordant = total - x_ties - y_ties + joint_ties - 2 * swaps;
  const double tau = static_cast<double>(concordant_minus_discordant) /
                     std::sqrt(static_cast<double>(total - x_ties) *
                               static_cast<double>(total - y_ties));
  return std::clamp(tau, -1.0, 1.0);
}

double spearman_rho(const std::vector<int>& x, const std::vector<int>& y) {
  const std::vector<double> xd(x.begin(), x.end()), yd(y.begin(), y.end());
  return spearman_rho(std::span<const double>(xd), std::span<const double>(yd));
}

double kendall_tau_b(const std::vector<int>& x, const std::vector<int>& y) {
  const std::vector<double> xd(x.begin(), x.end()), yd(y.begin(), y.end());
  return kendall_tau_b(std::span<const double>(xd), std::span<const double>(yd));
}

const char* column_title(ProfileColumn column) {
  switch (column) {
    case ProfileColumn::PercentAgreement: return "Percent Agreement";
    case ProfileColumn::CohenKappa: return "Cohen Kappa";
    case ProfileColumn::KrippendorffAlpha: return "K-Alpha";
    case ProfileColumn::Ac2Linear: return "Gwet AC2-L";
    case ProfileColumn::Ac2Quadratic: return "Gwet AC2-Q";
    case ProfileColumn::Spearman: return "Spearman";
    case ProfileColumn::Kendall: return "Kendall Tau";
  }
  return "";
}

JudgeProfile judge_profile(const std::vector<int>& judge, const std::vector<int>& gold, int k,
                           const ProfileOptions& options) {
  if (judge.size() != gold.size()) {
    throw Error(ErrorKind::InvalidArgument, "judge and gold columns differ in length");
  }
  if (judge.size() < 3) {
    throw Error(ErrorKind::InsufficientData,
                "judge profile needs at least 3 overlapping items, got " +
                    std::to_string(judge.size()));
  }
  const RatingsMatrix m = two_rater_matrix(judge, gold, k);
  require_valid(m);

  JudgeProfile profile;
  profile.n_items = judge.size();
  const bool constant_judge =
      std::all_of(judge.begin(), judge.end(), [&](int v) { return v == judge.front(); });

  auto fill = [&](ProfileColumn column, bool needs_signal, auto&& compute) {
    MetricValue& cell = profile.cells[static_cast<std::size_t>(column)];
    if (needs_signal && constant_judge) {
      cell.undefined_reason = "constant judge";
      return;
    }
    try {
      cell.value = compute();
    } catch (const Error& e) {
      cell.undefined_reason = std::string(to_string(e.kind()));
    }
  };

  fill(ProfileColumn::PercentAgreement, false,
       [&] { return percent_agreement(m, options.agreement_weights).coefficient; });
  fill(ProfileColumn::CohenKappa, true,
       [&] { return cohen_kappa(m, options.agreement_weights).coefficient; });
  fill(ProfileColumn::KrippendorffAlpha, true,
       [&] { return krippendorff_alpha(m, options.alpha_difference).coefficient; });
  fill(ProfileColumn::Ac2Linear, false,
       [&] { return gwet_ac(m, WeightScheme::Linear).coefficient; });
  fill(ProfileColumn::Ac2Quadratic, false,
       [&] { return gwet_ac(m, WeightScheme::Quadratic).coefficient; });
  fill(ProfileColumn::Spearman, true, [&] { return spearman_rho(judge, gold); });
  fill(ProfileColumn::Kendall, true, [&] { return kendall_tau_b(judge, gold); });
  return profile;
}

}  // namespace judgekit
