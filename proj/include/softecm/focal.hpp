#pragma once
// Focal elements over a frame of c clusters, credal partitions, and the
// transforms/indices computed from them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace softecm {

/// Subset of the cluster frame {0, ..., c-1}, stored as a 64-bit mask.
class FocalSet {
 public:
  static constexpr int kMaxUniverse = 63;

  FocalSet() = default;
  FocalSet(std::uint64_t bits, int universe_size);

  static FocalSet empty(int universe_size) { return {0, universe_size}; }
  static FocalSet singleton(int cluster, int universe_size);
  static FocalSet omega(int universe_size);
  static FocalSet from_members(std::span<const int> members, int universe_size);

  /// Parses "{}", "{1}", "{1,3}" (1-based members).
  static FocalSet parse(std::string_view label, int universe_size);
  /// Members of a label without a known universe; 0-based.
  static std::vector<int> parse_members(std::string_view label);

  std::uint64_t bits() const noexcept { return bits_; }
  int universe_size() const noexcept { return universe_size_; }
  int cardinality() const noexcept;
  bool contains(int cluster) const noexcept;
  bool is_empty() const noexcept { return bits_ == 0; }
  bool is_omega() const noexcept;
  std::vector<int> members() const;

  /// Sorted 1-based member list in braces.
  std::string label() const;

  friend bool operator==(const FocalSet&, const FocalSet&) = default;

 private:
  std::uint64_t bits_ = 0;
  int universe_size_ = 1;
};

/// Ordered focal elements used by a model: empty set first, then singletons,
/// then larger sets by (cardinality, bitmask).
class FocalFamily {
 public:
  FocalFamily() = default;

  static FocalFamily enumerate(int c, int max_cardinality, bool include_omega);

  /// Canonicalizes an arbitrary set list (e.g. parsed CSV headers). Requires
  /// the empty set and every singleton to be present, no duplicates.
  static FocalFamily from_sets(int c, std::vector<FocalSet> sets);

  int universe_size() const noexcept { return c_; }
  int max_cardinality() const noexcept { return max_cardinality_; }
  bool include_omega() const noexcept { return include_omega_; }

  std::size_t size() const noexcept { return sets_.size(); }
  const FocalSet& operator[](std::size_t k) const { return sets_[k]; }
  const std::vector<FocalSet>& sets() const noexcept { return sets_; }
  auto begin() const noexcept { return sets_.begin(); }
  auto end() const noexcept { return sets_.end(); }

  std::optional<std::size_t> index_of(const FocalSet& set) const;
  std::size_t singleton_index(int cluster) const { return 1 + static_cast<std::size_t>(cluster); }
  std::vector<std::string> labels() const;

  friend bool operator==(const FocalFamily& a, const FocalFamily& b) { return a.sets_ == b.sets_; }

 private:
  int c_ = 0;
  int max_cardinality_ = 0;
  bool include_omega_ = false;
  std::vector<FocalSet> sets_;
};

FocalFamily enumerate_family(int c, int max_cardinality, bool include_omega);

/// Mass matrix over a focal family; one row per object, each row on the simplex.
class CredalPartition {
 public:
  static constexpr double kRowTolerance = 1e-9;

  CredalPartition() = default;
  /// Throws std::invalid_argument when a row leaves the simplex.
  CredalPartition(FocalFamily family, Eigen::MatrixXd masses);

  const FocalFamily& family() const noexcept { return family_; }
  const Eigen::MatrixXd& masses() const noexcept { return masses_; }
  std::size_t num_objects() const noexcept { return static_cast<std::size_t>(masses_.rows()); }
  int num_clusters() const noexcept { return family_.universe_size(); }
  double mass(std::size_t object, std::size_t focal) const {
    return masses_(static_cast<Eigen::Index>(object), static_cast<Eigen::Index>(focal));
  }

 private:
  FocalFamily family_;
  Eigen::MatrixXd masses_;
};

struct PignisticResult {
  Eigen::MatrixXd probabilities;              // n x c
  std::vector<std::size_t> degenerate_rows;   // rows with m(empty) = 1, set uniform
};

/// BetP_i(k) = sum_{A contains k} m_i(A) / (|A| (1 - m_i(empty))).
PignisticResult pignistic(const CredalPartition& partition);

/// argmax of BetP per row, ties to the lowest cluster index.
std::vector<int> hard_assign(const CredalPartition& partition);

/// Average normalized specificity N* in [0, 1]; requires c >= 2.
double normalized_specificity(const CredalPartition& partition);

/// Index (into the family) of the largest mass per row; ties to the earlier set.
std::vector<std::size_t> argmax_focal(const CredalPartition& partition);

}  // namespace softecm
