#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "softecm/mass_update.hpp"

using namespace softecm;

namespace {

// Row objective for fixed distances.
double row_cost(const Eigen::RowVectorXd& m, const Eigen::RowVectorXd& d, const FocalFamily& family, double alpha,
                double beta, double delta) {
  double j = delta * delta * std::pow(m(0), beta);
  for (std::size_t k = 1; k < family.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    j += std::pow(family[k].cardinality(), alpha) * std::pow(m(kk), beta) * d(kk);
  }
  return j;
}

}  // namespace

TEST_CASE("equidistant singletons get equal mass") {
  const auto family = enumerate_family(2, 1, false);
  Eigen::MatrixXd d(1, 3);
  d << 0.0, 2.5, 2.5;
  const auto m = evidential_masses(d, family, 1.0, 2.0, 3.0);
  CHECK(m(0, 1) == doctest::Approx(m(0, 2)));
  CHECK(m.row(0).sum() == doctest::Approx(1.0));
}

TEST_CASE("closed form against the expression") {
  const auto family = enumerate_family(2, 2, true);
  Eigen::MatrixXd d(1, 4);
  d << 0.0, 1.0, 4.0, 2.0;
  const double alpha = 1.0;
  const double beta = 2.0;
  const double delta = 3.0;
  const auto m = evidential_masses(d, family, alpha, beta, delta);
  const double w1 = 1.0;
  const double w2 = 0.25;
  const double w12 = 1.0 / (2.0 * 2.0);
  const double we = 1.0 / 9.0;
  const double z = w1 + w2 + w12 + we;
  CHECK(m(0, 0) == doctest::Approx(we / z));
  CHECK(m(0, 1) == doctest::Approx(w1 / z));
  CHECK(m(0, 2) == doctest::Approx(w2 / z));
  CHECK(m(0, 3) == doctest::Approx(w12 / z));
}

TEST_CASE("a distance at the floor takes all the mass") {
  const auto family = enumerate_family(3, 2, false);
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(2, static_cast<Eigen::Index>(family.size()), 3.0);
  d(0, 4) = 0.0;
  d(1, 2) = -0.01;
  std::vector<std::size_t> clamped;
  const auto m = evidential_masses(d, family, 1.0, 2.0, 10.0, &clamped);
  CHECK(m(0, 4) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m(1, 2) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(clamped == std::vector<std::size_t>{0, 1});
}

TEST_CASE("small beta and tiny distances stay finite") {
  const auto family = enumerate_family(3, 3, false);
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(1, static_cast<Eigen::Index>(family.size()), 1e-9);
  d(0, 3) = 1e-11;
  const auto m = evidential_masses(d, family, 1.0, 1.01, 10.0);
  CHECK(m.allFinite());
  CHECK(m.row(0).sum() == doctest::Approx(1.0));
  CHECK(m(0, 3) == doctest::Approx(1.0));
}

TEST_CASE("closed-form row beats 10,000 random simplex rows") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.1, 9.0);
  const auto family = enumerate_family(2, 2, true);
  for (double beta : {1.5, 2.0, 3.0}) {
    Eigen::MatrixXd d(3, 4);
    for (Eigen::Index k = 0; k < d.size(); ++k) d(k) = u(rng);
    const double alpha = 1.0;
    const double delta = 2.0;
    const auto m = evidential_masses(d, family, alpha, beta, delta);
    for (Eigen::Index i = 0; i < 3; ++i) {
      const double best = row_cost(m.row(i), d.row(i), family, alpha, beta, delta);
      double oracle_min = std::numeric_limits<double>::infinity();
      for (int s = 0; s < 10000; ++s) {
        oracle_min = std::min(oracle_min, row_cost(oracle::simplex_row(rng, 4), d.row(i), family, alpha, beta, delta));
      }
      CHECK(best <= oracle_min + 1e-12);
    }
  }
}

TEST_CASE("rows lie on the simplex") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  const auto family = enumerate_family(4, 2, true);
  Eigen::MatrixXd d(30, static_cast<Eigen::Index>(family.size()));
  for (Eigen::Index k = 0; k < d.size(); ++k) d(k) = u(rng);
  const auto m = evidential_masses(d, family, 0.5, 1.7, 4.0);
  CHECK(m.minCoeff() >= 0.0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) CHECK(m.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_NOTHROW(CredalPartition(family, m));
}

TEST_CASE("mismatched distance matrix is rejected") {
  const auto family = enumerate_family(2, 2, false);
  CHECK_THROWS_AS(evidential_masses(Eigen::MatrixXd::Ones(1, 3), family, 1.0, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("sample_distinct") {
  const auto a = sample_distinct(10, 4, 7);
  CHECK(a.size() == 4);
  CHECK(std::set<std::size_t>(a.begin(), a.end()).size() == 4);
  for (auto v : a) CHECK(v < 10);
  CHECK(sample_distinct(10, 4, 7) == a);
  CHECK(sample_distinct(5, 5, 1).size() == 5);
  CHECK_THROWS_AS(sample_distinct(3, 4, 0), std::invalid_argument);
}
