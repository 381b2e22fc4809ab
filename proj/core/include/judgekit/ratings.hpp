#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace judgekit {

// Ordered category set. Levels are the integers 1..K; labels are display only.
class OrdinalScale {
 public:
  explicit OrdinalScale(std::vector<std::string> labels);

  // Scale with labels "1".."K".
  static OrdinalScale levels(int k);

  int size() const noexcept { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(int level) const { return labels_.at(level - 1); }
  bool contains(int level) const noexcept { return level >= 1 && level <= size(); }

  bool operator==(const OrdinalScale&) const = default;

 private:
  std::vector<std::string> labels_;
};

enum class WeightScheme { Identity, Linear, Quadratic };

const char* to_string(WeightScheme scheme);
WeightScheme parse_weight_scheme(const std::string& text);

// Dense K x K agreement weights, addressed with 1-based levels.
class WeightMatrix {
 public:
  WeightMatrix(WeightScheme scheme, int k);

  int size() const noexcept { return k_; }
  WeightScheme scheme() const noexcept { return scheme_; }
  double operator()(int k, int l) const { return w_[(k - 1) * k_ + (l - 1)]; }
  double total() const noexcept;

 private:
  WeightScheme scheme_;
  int k_;
  std::vector<double> w_;
};

WeightMatrix weight_matrix(WeightScheme scheme, int k);

using Cell = std::optional<int>;

// Items x raters grid of optional levels. Construction checks shape only, so
// a matrix can carry invariant violations; validate_matrix reports them and
// every statistic rejects them.
class RatingsMatrix {
 public:
  RatingsMatrix(std::vector<std::string> items, std::vector<std::string> raters,
                std::vector<Cell> cells, OrdinalScale scale);

  // Anonymous items "0".."n-1" and raters "r0".."r(m-1)"; rows are items.
  static RatingsMatrix from_rows(const std::vector<std::vector<Cell>>& rows, int k);

  std::size_t n_items() const noexcept { return items_.size(); }
  std::size_t n_raters() const noexcept { return raters_.size(); }
  const std::vector<std::string>& items() const noexcept { return items_; }
  const std::vector<std::string>& raters() const noexcept { return raters_; }
  const OrdinalScale& scale() const noexcept { return scale_; }
  int k() const noexcept { return scale_.size(); }

  const Cell& at(std::size_t item, std::size_t rater) const {
    return cells_[item * raters_.size() + rater];
  }

  std::optional<std::size_t> rater_index(const std::string& id) const;

  // Ratings present on an item (r_i).
  int present_count(std::size_t item) const;

  // Per-category counts r_ik for an item, index 0 holds level 1.
  std::vector<int> category_counts(std::size_t item) const;

  // Copy restricted to the given raters, in the given order.
  RatingsMatrix select_raters(const std::vector<std::size_t>& raters) const;

  // Copy with rows reordered; order[i] is the source row of row i.
  RatingsMatrix permute_items(const std::vector<std::size_t>& order) const;

 private:
  std::vector<std::string> items_;
  std::vector<std::string> raters_;
  std::vector<Cell> cells_;
  OrdinalScale scale_;
};

enum class ViolationKind { OutOfRange, NoCoRatedItems };

struct Violation {
  ViolationKind kind;
  std::size_t item = 0;
  std::size_t rater = 0;
  std::string message;
};

struct Diagnostics {
  std::size_t n_items = 0;
  std::size_t n_raters = 0;
  std::size_t missing_cells = 0;
  std::size_t co_rated_items = 0;
  // Present ratings per level; index 0 holds level 1.
  std::vector<std::size_t> category_totals;
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

Diagnostics validate_matrix(const RatingsMatrix& m);

// Throws on the first violation reported by validate_matrix.
void require_valid(const RatingsMatrix& m);

// Item-averaged category proportions over items with at least two ratings.
std::vector<double> marginal_proportions(const RatingsMatrix& m);

struct PairedLevels {
  std::vector<std::size_t> items;  // source row indices, ascending
  std::vector<int> a;
  std::vector<int> b;

  std::size_t size() const noexcept { return items.size(); }
};

PairedLevels paired_columns(const RatingsMatrix& m, const std::string& rater_a,
                            const std::string& rater_b);

// Two-rater matrix from aligned level vectors.
RatingsMatrix two_rater_matrix(const std::vector<int>& a, const std::vector<int>& b, int k);

}  // namespace judgekit
