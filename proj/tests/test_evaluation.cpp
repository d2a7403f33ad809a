#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "softecm/evaluation.hpp"

using namespace softecm;

namespace {

std::vector<int> random_labels(std::mt19937_64& rng, std::size_t n, int k) {
  std::uniform_int_distribution<int> u(0, k - 1);
  std::vector<int> out(n);
  for (auto& v : out) v = u(rng);
  return out;
}

}  // namespace

TEST_CASE("rand index examples") {
  const std::vector<int> a{0, 0, 1, 1};
  const std::vector<int> b{0, 1, 0, 1};
  CHECK(rand_index(a, a) == 1.0);
  CHECK(rand_index(a, b) == doctest::Approx(1.0 / 3.0));
  CHECK(rand_index(a, std::vector<int>{7, 7, 3, 3}) == 1.0);
  CHECK_THROWS_AS(rand_index(std::vector<int>{0}, std::vector<int>{0}), std::invalid_argument);
  CHECK_THROWS_AS(rand_index(a, std::vector<int>{0, 1}), std::invalid_argument);
}

TEST_CASE("matched accuracy examples") {
  const std::vector<int> truth{1, 1, 0, 0, 1};
  CHECK(matched_accuracy(truth, truth) == 1.0);
  CHECK(matched_accuracy(std::vector<int>{5, 5, 2, 2, 5}, truth) == 1.0);
  CHECK(matched_accuracy(std::vector<int>{0, 0, 1, 1, 1}, truth) == doctest::Approx(0.8));
  CHECK_THROWS_AS(matched_accuracy(truth, std::vector<int>{0}), std::invalid_argument);
}

TEST_CASE("more clusters than classes and vice versa") {
  CHECK(matched_accuracy(std::vector<int>{0, 1, 2, 3}, std::vector<int>{0, 0, 1, 1}) == doctest::Approx(0.5));
  CHECK(matched_accuracy(std::vector<int>{0, 0, 0, 0}, std::vector<int>{0, 0, 1, 2}) == doctest::Approx(0.5));
}

TEST_CASE("rand index matches pair enumeration") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 29;
    const auto a = random_labels(rng, n, 1 + static_cast<int>(rng() % 5));
    const auto b = random_labels(rng, n, 1 + static_cast<int>(rng() % 5));
    CHECK(rand_index(a, b) == doctest::Approx(oracle::rand_index_pairs(a, b)).epsilon(1e-14));
  }
}

TEST_CASE("matched accuracy matches exhaustive mapping search") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const auto pred = random_labels(rng, n, 1 + static_cast<int>(rng() % 4));
    const auto truth = random_labels(rng, n, 1 + static_cast<int>(rng() % 4));
    CHECK(matched_accuracy(pred, truth) == doctest::Approx(oracle::accuracy_brute_force(pred, truth)));
  }
}

TEST_CASE("both metrics ignore label names") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_labels(rng, 12, 4);
    const auto b = random_labels(rng, 12, 3);
    std::vector<int> perm{2, 0, 3, 1};
    std::vector<int> renamed(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) renamed[i] = perm[static_cast<std::size_t>(a[i])];
    CHECK(rand_index(renamed, b) == rand_index(a, b));
    CHECK(matched_accuracy(renamed, b) == doctest::Approx(matched_accuracy(a, b)));
    CHECK(matched_accuracy(b, renamed) == doctest::Approx(matched_accuracy(b, a)));
  }
}

TEST_CASE("assignment solver finds the maximum weight") {
  Eigen::MatrixXd w(3, 3);
  w << 1, 2, 3, 2, 4, 6, 3, 6, 9;
  const auto col = max_weight_assignment(w);
  double total = 0.0;
  for (int r = 0; r < 3; ++r) total += w(r, col[static_cast<std::size_t>(r)]);
  CHECK(total == doctest::Approx(14.0));  // rearrangement: the identity pairing
  CHECK_THROWS_AS(max_weight_assignment(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}
