#include "softecm/focal.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "softecm/errors.hpp"

namespace softecm {

DataFormatError::DataFormatError(const std::string& what, std::optional<std::size_t> row,
                                 std::optional<std::size_t> column)
    : std::runtime_error([&] {
        std::string msg = what;
        if (row) msg += " (row " + std::to_string(*row);
        if (column) msg += std::string(row ? ", " : " (") + "column " + std::to_string(*column);
        if (row || column) msg += ")";
        return msg;
      }()),
      row_(row),
      column_(column) {}

namespace {

std::uint64_t universe_mask(int c) {
  return c >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << c) - 1);
}

void check_universe(int c) {
  if (c < 1 || c > FocalSet::kMaxUniverse) {
    throw std::invalid_argument("cluster count must be in [1, " +
                                std::to_string(FocalSet::kMaxUniverse) + "], got " +
                                std::to_string(c));
  }
}

bool canonical_less(const FocalSet& a, const FocalSet& b) {
  const int ca = a.cardinality();
  const int cb = b.cardinality();
  if (ca != cb) return ca < cb;
  return a.bits() < b.bits();
}

}  // namespace

FocalSet::FocalSet(std::uint64_t bits, int universe_size) : bits_(bits), universe_size_(universe_size) {
  check_universe(universe_size);
  if ((bits & ~universe_mask(universe_size)) != 0) {
    throw std::invalid_argument("focal set has members outside a universe of size " +
                                std::to_string(universe_size));
  }
}

FocalSet FocalSet::singleton(int cluster, int universe_size) {
  if (cluster < 0 || cluster >= universe_size) {
    throw std::invalid_argument("cluster index " + std::to_string(cluster) + " out of range");
  }
  return {std::uint64_t{1} << cluster, universe_size};
}

FocalSet FocalSet::omega(int universe_size) {
  check_universe(universe_size);
  return {universe_mask(universe_size), universe_size};
}

FocalSet FocalSet::from_members(std::span<const int> members, int universe_size) {
  check_universe(universe_size);
  std::uint64_t bits = 0;
  for (int k : members) {
    if (k < 0 || k >= universe_size) {
      throw std::invalid_argument("cluster index " + std::to_string(k) + " out of range");
    }
    bits |= std::uint64_t{1} << k;
  }
  return {bits, universe_size};
}

std::vector<int> FocalSet::parse_members(std::string_view label) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  label = trim(label);
  if (label.size() < 2 || label.front() != '{' || label.back() != '}') {
    throw DataFormatError("focal set label must be braced, got '" + std::string(label) + "'");
  }
  std::string_view body = trim(label.substr(1, label.size() - 2));
  std::vector<int> members;
  while (!body.empty()) {
    const auto comma = body.find(',');
    std::string_view token = trim(body.substr(0, comma));
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || value < 1) {
      throw DataFormatError("bad member '" + std::string(token) + "' in focal set label '" +
                            std::string(label) + "'");
    }
    members.push_back(value - 1);
    if (comma == std::string_view::npos) break;
    body = body.substr(comma + 1);
  }
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw DataFormatError("duplicate member in focal set label '" + std::string(label) + "'");
  }
  return members;
}

FocalSet FocalSet::parse(std::string_view label, int universe_size) {
  const auto members = parse_members(label);
  return from_members(members, universe_size);
}

int FocalSet::cardinality() const noexcept { return std::popcount(bits_); }

bool FocalSet::contains(int cluster) const noexcept {
  return cluster >= 0 && cluster < universe_size_ && ((bits_ >> cluster) & 1U) != 0;
}

bool FocalSet::is_omega() const noexcept { return bits_ == universe_mask(universe_size_); }

std::vector<int> FocalSet::members() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(cardinality()));
  for (int k = 0; k < universe_size_; ++k) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

std::string FocalSet::label() const {
  std::string out = "{";
  bool first = true;
  for (int k : members()) {
    if (!first) out += ',';
    out += std::to_string(k + 1);
    first = false;
  }
  out += '}';
  return out;
}

FocalFamily FocalFamily::enumerate(int c, int max_cardinality, bool include_omega) {
  if (c < 1) throw std::invalid_argument("enumerate_family: c must be >= 1");
  check_universe(c);
  if (max_cardinality < 1 || max_cardinality > c) {
    throw std::invalid_argument("enumerate_family: max cardinality must be in [1, c]");
  }
  FocalFamily family;
  family.c_ = c;
  family.max_cardinality_ = max_cardinality;
  family.include_omega_ = include_omega;
  family.sets_.push_back(FocalSet::empty(c));

  // Gosper's hack walks each cardinality in increasing bitmask order.
  for (int k = 1; k <= max_cardinality; ++k) {
    std::uint64_t bits = (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = std::uint64_t{1} << c;
    while (bits < limit) {
      family.sets_.emplace_back(bits, c);
      const std::uint64_t low = bits & (~bits + 1);
      const std::uint64_t ripple = bits + low;
      bits = (((ripple ^ bits) >> 2) / low) | ripple;
    }
  }
  if (include_omega && max_cardinality < c) family.sets_.push_back(FocalSet::omega(c));
  return family;
}

FocalFamily FocalFamily::from_sets(int c, std::vector<FocalSet> sets) {
  check_universe(c);
  for (const auto& s : sets) {
    if (s.universe_size() != c) throw std::invalid_argument("focal sets disagree on universe size");
  }
  std::sort(sets.begin(), sets.end(), canonical_less);
  if (std::adjacent_find(sets.begin(), sets.end()) != sets.end()) {
    throw std::invalid_argument("duplicate focal set in family");
  }
  if (sets.empty() || !sets.front().is_empty()) {
    throw std::invalid_argument("focal family must contain the empty set");
  }
  for (int k = 0; k < c; ++k) {
    if (static_cast<std::size_t>(k + 1) >= sets.size() || sets[static_cast<std::size_t>(k + 1)] != FocalSet::singleton(k, c)) {
      throw std::invalid_argument("focal family must contain every singleton");
    }
  }
  FocalFamily family;
  family.c_ = c;
  family.max_cardinality_ = 1;
  bool has_omega = false;
  for (const auto& s : sets) {
    if (s.is_omega() && c > 1) {
      has_omega = true;
    } else {
      family.max_cardinality_ = std::max(family.max_cardinality_, s.cardinality());
    }
  }
  if (has_omega && family.max_cardinality_ == c - 1) family.max_cardinality_ = c;
  family.include_omega_ = has_omega;
  family.sets_ = std::move(sets);
  return family;
}

std::optional<std::size_t> FocalFamily::index_of(const FocalSet& set) const {
  auto it = std::find(sets_.begin(), sets_.end(), set);
  if (it == sets_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - sets_.begin());
}

std::vector<std::string> FocalFamily::labels() const {
  std::vector<std::string> out;
  out.reserve(sets_.size());
  for (const auto& s : sets_) out.push_back(s.label());
  return out;
}

FocalFamily enumerate_family(int c, int max_cardinality, bool include_omega) {
  return FocalFamily::enumerate(c, max_cardinality, include_omega);
}

CredalPartition::CredalPartition(FocalFamily family, Eigen::MatrixXd masses)
    : family_(std::move(family)), masses_(std::move(masses)) {
  if (static_cast<std::size_t>(masses_.cols()) != family_.size()) {
    throw std::invalid_argument("mass matrix has " + std::to_string(masses_.cols()) +
                                " columns for a family of " + std::to_string(family_.size()));
  }
  for (Eigen::Index i = 0; i < masses_.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index k = 0; k < masses_.cols(); ++k) {
      const double m = masses_(i, k);
      if (!(m >= -kRowTolerance && m <= 1.0 + kRowTolerance)) {
        throw std::invalid_argument("mass outside [0,1] in row " + std::to_string(i + 1));
      }
      sum += m;
    }
    if (std::abs(sum - 1.0) > kRowTolerance) {
      throw std::invalid_argument("masses in row " + std::to_string(i + 1) + " sum to " +
                                  std::to_string(sum));
    }
  }
}

PignisticResult pignistic(const CredalPartition& partition) {
  const auto& family = partition.family();
  const int c = family.universe_size();
  const auto n = static_cast<Eigen::Index>(partition.num_objects());
  PignisticResult result;
  result.probabilities = Eigen::MatrixXd::Zero(n, c);
  for (Eigen::Index i = 0; i < n; ++i) {
    // Sum of non-empty masses equals 1 - m(empty) on the simplex.
    double non_empty = 0.0;
    for (std::size_t k = 1; k < family.size(); ++k) non_empty += partition.mass(static_cast<std::size_t>(i), k);
    if (non_empty <= 0.0) {
      result.probabilities.row(i).setConstant(1.0 / c);
      result.degenerate_rows.push_back(static_cast<std::size_t>(i));
      continue;
    }
    for (std::size_t k = 1; k < family.size(); ++k) {
      const double share = partition.mass(static_cast<std::size_t>(i), k) / family[k].cardinality();
      for (int member : family[k].members()) result.probabilities(i, member) += share;
    }
    result.probabilities.row(i) /= non_empty;
  }
  return result;
}

std::vector<int> hard_assign(const CredalPartition& partition) {
  const auto probs = pignistic(partition).probabilities;
  std::vector<int> labels(static_cast<std::size_t>(probs.rows()));
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    int best = 0;
    for (Eigen::Index k = 1; k < probs.cols(); ++k) {
      if (probs(i, k) > probs(i, best)) best = static_cast<int>(k);
    }
    labels[static_cast<std::size_t>(i)] = best;
  }
  return labels;
}

double normalized_specificity(const CredalPartition& partition) {
  const int c = partition.num_clusters();
  if (c < 2) throw std::invalid_argument("normalized specificity needs at least 2 clusters");
  const std::size_t n = partition.num_objects();
  if (n == 0) throw std::invalid_argument("normalized specificity of an empty partition");
  const auto& family = partition.family();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 1; k < family.size(); ++k) {
      total += partition.mass(i, k) * std::log2(static_cast<double>(family[k].cardinality()));
    }
  }
  return total / (static_cast<double>(n) * std::log2(static_cast<double>(c)));
}

std::vector<std::size_t> argmax_focal(const CredalPartition& partition) {
  const auto& m = partition.masses();
  std::vector<std::size_t> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < m.cols(); ++k) {
      if (m(i, k) > m(i, best)) best = k;
    }
    out[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
  }
  return out;
}

}  // namespace softecm
