#include "judgekit/ratings.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "judgekit/error.hpp"

namespace judgekit {

OrdinalScale::OrdinalScale(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2) {
    throw Error(ErrorKind::InvalidScale, "ordinal scale needs at least 2 categories");
  }
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) {
    throw Error(ErrorKind::InvalidScale, "ordinal scale labels must be unique");
  }
}

OrdinalScale OrdinalScale::levels(int k) {
  if (k < 2) {
    throw Error(ErrorKind::InvalidScale,
                "ordinal scale needs at least 2 categories, got " + std::to_string(k));
  }
  std::vector<std::string> labels;
  for (int level = 1; level <= k; ++level) labels.push_back(std::to_string(level));
  return OrdinalScale(std::move(labels));
}

const char* to_string(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::Identity: return "identity";
    case WeightScheme::Linear: return "linear";
    case WeightScheme::Quadratic: return "quadratic";
  }
  return "identity";
}

WeightScheme parse_weight_scheme(const std::string& text) {
  if (text == "identity") return WeightScheme::Identity;
  if (text == "linear") return WeightScheme::Linear;
  if (text == "quadratic") return WeightScheme::Quadratic;
  throw Error(ErrorKind::InvalidArgument, "unknown weight scheme '" + text + "'");
}

WeightMatrix::WeightMatrix(WeightScheme scheme, int k) : scheme_(scheme), k_(k) {
  if (k < 2) {
    throw Error(ErrorKind::InvalidScale,
                "weight matrix needs at least 2 categories, got " + std::to_string(k));
  }
  w_.assign(static_cast<std::size_t>(k) * k, 0.0);
  const double span = k - 1;
  for (int a = 1; a <= k; ++a) {
    for (int b = 1; b <= k; ++b) {
      const double dist = std::abs(a - b);
      double w = 0.0;
      switch (scheme) {
        case WeightScheme::Identity: w = a == b ? 1.0 : 0.0; break;
        case WeightScheme::Linear: w = 1.0 - dist / span; break;
        case WeightScheme::Quadratic: w = 1.0 - (dist * dist) / (span * span); break;
      }
      w_[(a - 1) * k + (b - 1)] = w;
    }
  }
}

double WeightMatrix::total() const noexcept {
  double sum = 0.0;
  for (double w : w_) sum += w;
  return sum;
}

WeightMatrix weight_matrix(WeightScheme scheme, int k) { return WeightMatrix(scheme, k); }

RatingsMatrix::RatingsMatrix(std::vector<std::string> items, std::vector<std::string> raters,
                             std::vector<Cell> cells, OrdinalScale scale)
    : items_(std::move(items)),
      raters_(std::move(raters)),
      cells_(std::move(cells)),
      scale_(std::move(scale)) {
  if (cells_.size() != items_.size() * raters_.size()) {
    throw Error(ErrorKind::InvalidArgument, "ratings matrix cell count does not match shape");
  }
  std::set<std::string> unique_raters(raters_.begin(), raters_.end());
  if (unique_raters.size() != raters_.size()) {
    throw Error(ErrorKind::InvalidArgument, "rater identifiers must be unique");
  }
}

RatingsMatrix RatingsMatrix::from_rows(const std::vector<std::vector<Cell>>& rows, int k) {
  const std::size_t width = rows.empty() ? 0 : rows.front().size();
  std::vector<std::string> items;
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != width) {
      throw Error(ErrorKind::InvalidArgument, "ragged ratings rows");
    }
    items.push_back(std::to_string(i));
    cells.insert(cells.end(), rows[i].begin(), rows[i].end());
  }
  std::vector<std::string> raters;
  for (std::size_t r = 0; r < width; ++r) raters.push_back("r" + std::to_string(r));
  return RatingsMatrix(std::move(items), std::move(raters), std::move(cells),
                       OrdinalScale::levels(k));
}

std::optional<std::size_t> RatingsMatrix::rater_index(const std::string& id) const {
  auto it = std::find(raters_.begin(), raters_.end(), id);
  if (it == raters_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - raters_.begin());
}

int RatingsMatrix::present_count(std::size_t item) const {
  int count = 0;
  for (std::size_t r = 0; r < raters_.size(); ++r) count += at(item, r).has_value() ? 1 : 0;
  return count;
}

std::vector<int> RatingsMatrix::category_counts(std::size_t item) const {
  std::vector<int> counts(static_cast<std::size_t>(k()), 0);
  for (std::size_t r = 0; r < raters_.size(); ++r) {
    const Cell& c = at(item, r);
    if (c && scale_.contains(*c)) ++counts[*c - 1];
  }
  return counts;
}

RatingsMatrix RatingsMatrix::select_raters(const std::vector<std::size_t>& raters) const {
  std::vector<std::string> ids;
  for (std::size_t r : raters) ids.push_back(raters_.at(r));
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    for (std::size_t r : raters) cells.push_back(at(i, r));
  }
  return RatingsMatrix(items_, std::move(ids), std::move(cells), scale_);
}

RatingsMatrix RatingsMatrix::permute_items(const std::vector<std::size_t>& order) const {
  if (order.size() != items_.size()) {
    throw Error(ErrorKind::InvalidArgument, "item permutation has wrong length");
  }
  std::vector<std::string> ids;
  std::vector<Cell> cells;
  for (std::size_t src : order) {
    ids.push_back(items_.at(src));
    for (std::size_t r = 0; r < raters_.size(); ++r) cells.push_back(at(src, r));
  }
  return RatingsMatrix(std::move(ids), raters_, std::move(cells), scale_);
}

Diagnostics validate_matrix(const RatingsMatrix& m) {
  Diagnostics d;
  d.n_items = m.n_items();
  d.n_raters = m.n_raters();
  d.category_totals.assign(static_cast<std::size_t>(m.k()), 0);
  for (std::size_t i = 0; i < m.n_items(); ++i) {
    int present = 0;
    for (std::size_t r = 0; r < m.n_raters(); ++r) {
      const Cell& c = m.at(i, r);
      if (!c) {
        ++d.missing_cells;
        continue;
      }
      ++present;
      if (!m.scale().contains(*c)) {
        d.violations.push_back({ViolationKind::OutOfRange, i, r,
                                "item '" + m.items()[i] + "', rater '" + m.raters()[r] +
                                    "': level " + std::to_string(*c) + " outside 1.." +
                                    std::to_string(m.k())});
      } else {
        ++d.category_totals[*c - 1];
      }
    }
    if (present >= 2) ++d.co_rated_items;
  }
  if (d.co_rated_items == 0) {
    d.violations.push_back(
        {ViolationKind::NoCoRatedItems, 0, 0, "no co-rated items: no item has 2 or more ratings"});
  }
  return d;
}

void require_valid(const RatingsMatrix& m) {
  const Diagnostics d = validate_matrix(m);
  if (d.ok()) return;
  const Violation& v = d.violations.front();
  throw Error(v.kind == ViolationKind::NoCoRatedItems ? ErrorKind::InsufficientData
                                                      : ErrorKind::InvalidArgument,
              v.message);
}

std::vector<double> marginal_proportions(const RatingsMatrix& m) {
  require_valid(m);
  std::vector<double> pi(static_cast<std::size_t>(m.k()), 0.0);
  std::size_t used = 0;
  for (std::size_t i = 0; i < m.n_items(); ++i) {
    const int present = m.present_count(i);
    if (present < 2) continue;
    ++used;
    const std::vector<int> counts = m.category_counts(i);
    for (std::size_t k = 0; k < counts.size(); ++k) {
      pi[k] += static_cast<double>(counts[k]) / present;
    }
  }
  for (double& p : pi) p /= static_cast<double>(used);
  return pi;
}

PairedLevels paired_columns(const RatingsMatrix& m, const std::string& rater_a,
                            const std::string& rater_b) {
  const auto a = m.rater_index(rater_a);
  const auto b = m.rater_index(rater_b);
  if (!a) throw Error(ErrorKind::InvalidArgument, "unknown rater '" + rater_a + "'");
  if (!b) throw Error(ErrorKind::InvalidArgument, "unknown rater '" + rater_b + "'");
  PairedLevels out;
  for (std::size_t i = 0; i < m.n_items(); ++i) {
    const Cell& ca = m.at(i, *a);
    const Cell& cb = m.at(i, *b);
    if (!ca || !cb) continue;
    out.items.push_back(i);
    out.a.push_back(*ca);
    out.b.push_back(*cb);
  }
  if (out.items.empty()) {
    throw Error(ErrorKind::InsufficientData,
                "raters '" + rater_a + "' and '" + rater_b + "' share no rated items");
  }
  return out;
}

RatingsMatrix two_rater_matrix(const std::vector<int>& a, const std::vector<int>& b, int k) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::InvalidArgument, "rating vectors differ in length");
  }
  std::vector<std::vector<Cell>> rows;
  rows.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) rows.push_back({a[i], b[i]});
  return RatingsMatrix::from_rows(rows, k);
}

}  // namespace judgekit
