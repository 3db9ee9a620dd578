#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gazegram {

/// Multiset of length-N windows, keyed by pattern text.
using NgramCounts = std::map<std::string, std::int64_t>;

/// Every |s| - N + 1 sliding window of `s`. Throws ArgumentError for N < 1.
NgramCounts extract_ngrams(std::string_view s, int n);

/// Per-participant and total N-gram counts at one (level, N).
class PatternTable {
 public:
  PatternTable() = default;
  PatternTable(int level, int n) : level_(level), n_(n) {}

  int level() const { return level_; }
  int n() const { return n_; }

  /// Participants in insertion order, including those with no patterns.
  const std::vector<std::string>& participants() const { return participants_; }
  bool has_participant(std::string_view p) const;

  void add_participant(const std::string& participant, const NgramCounts& counts);

  std::int64_t total(const std::string& pattern) const;
  /// Number of participants whose count for `pattern` is non-zero.
  std::int64_t support(const std::string& pattern) const;
  std::int64_t count(const std::string& pattern, const std::string& participant) const;

  const std::map<std::string, std::map<std::string, std::int64_t>>& counts() const {
    return counts_;
  }
  const std::map<std::string, std::int64_t>& totals() const { return totals_; }

  /// Non-zero counts of one participant. Throws LookupError when unknown.
  NgramCounts vector_of(const std::string& participant) const;

  /// Patterns by total descending, ties by pattern text.
  std::vector<std::string> sorted_patterns() const;

  /// Stacking order when `participant` is the focus: that participant's
  /// count descending, then total descending, then pattern text.
  std::vector<std::string> sorted_for(const std::string& participant) const;

  /// Copy restricted to `patterns` (participants are kept).
  PatternTable restricted_to(const std::vector<std::string>& patterns) const;

  std::size_t size() const { return totals_.size(); }
  bool empty() const { return totals_.empty(); }

 private:
  int level_ = 1;
  int n_ = 1;
  std::vector<std::string> participants_;
  std::map<std::string, std::map<std::string, std::int64_t>> counts_;
  std::map<std::string, std::int64_t> totals_;
};

/// Builds a table from participant -> transition string pairs, preserving
/// the order given.
PatternTable build_table(const std::vector<std::pair<std::string, std::string>>& strings,
                         int n, int level);

enum class ThresholdOp { more, less };

/// Keeps patterns whose total is strictly above (more) or below (less)
/// `threshold`. Throws ArgumentError for a negative threshold.
PatternTable filter_by_threshold(const PatternTable& table, ThresholdOp op, double threshold);

struct CommonEntry {
  std::string pattern;
  std::int64_t base = 0;     // min of the two counts
  std::int64_t surplus = 0;  // |count_p - count_q|
  std::string owner;         // participant holding the surplus; empty when equal
};

struct UniqueEntry {
  std::string pattern;
  std::int64_t count = 0;
};

struct DiffReport {
  std::string p;
  std::string q;
  std::vector<CommonEntry> common;
  std::vector<UniqueEntry> unique_p;
  std::vector<UniqueEntry> unique_q;
};

/// Classifies the union of both supports into shared and one-sided
/// patterns. Throws ArgumentError when p == q and LookupError for unknown
/// participants.
DiffReport diff(const PatternTable& table, const std::string& p, const std::string& q);

/// Cosine of two non-negative count vectors; 0 when either is all-zero.
double cosine_of(const NgramCounts& a, const NgramCounts& b);
double cosine(const PatternTable& table, const std::string& p, const std::string& q);

struct SimilarityMatrix {
  std::vector<std::string> participants;
  std::vector<std::vector<double>> values;
  std::pair<std::size_t, std::size_t> most_similar{0, 1};
  std::pair<std::size_t, std::size_t> least_similar{0, 1};
};

/// Full symmetric matrix plus the off-diagonal argmax / argmin pairs (first
/// in row-major order on ties). Throws ArgumentError with < 2 participants.
SimilarityMatrix similarity_matrix(const PatternTable& table);

enum class AoiRole { starts, passes, arrives };

/// Patterns starting at, containing, or ending at `symbol`, in table order.
std::vector<std::string> patterns_through_aoi(const PatternTable& table, char symbol,
                                              AoiRole mode);

}  // namespace gazegram
