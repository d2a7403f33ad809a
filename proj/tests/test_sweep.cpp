#include <doctest.h>

#include "softecm/datasets.hpp"
#include "softecm/soft_ecm.hpp"

using namespace softecm;

namespace {

SoftEcmConfig quick() {
  SoftEcmConfig cfg;
  cfg.max_outer = 30;
  cfg.max_inner = 20;
  cfg.epsilon = 1e-2;
  return cfg;
}

}  // namespace

TEST_CASE("default grids") {
  const auto betas = default_beta_grid();
  const auto lambdas = default_lambda_grid();
  REQUIRE(betas.size() == 10);
  REQUIRE(lambdas.size() == 10);
  for (std::size_t k = 0; k < 10; ++k) {
    CHECK(betas[k] == doctest::Approx(1.1 + 0.1 * static_cast<double>(k)));
    CHECK(lambdas[k] == doctest::Approx(1.0 + static_cast<double>(k)));
  }
}

TEST_CASE("single cell grid returns that cell") {
  const auto data = gen_diamond();
  const auto res = sweep(data.objects, quick(), {1.5}, {2.0}, 3);
  REQUIRE(res.cells.size() == 1);
  REQUIRE(res.best.has_value());
  CHECK(*res.best == 0);
  const auto& cell = res.cells[0];
  CHECK(cell.nstar.size() == 3);
  double mean = 0.0;
  for (double v : cell.nstar) mean += v / 3.0;
  CHECK(cell.mean_nstar == doctest::Approx(mean));
  CHECK(cell.std_nstar >= 0.0);
}

TEST_CASE("2x2 grid on the diamond: bounded values, best is the minimum") {
  const auto data = gen_diamond();
  const auto res = sweep(data.objects, quick(), {1.5, 2.0}, {1.0, 3.0}, 2);
  REQUIRE(res.cells.size() == 4);
  CHECK(res.cells[1].beta == 1.5);
  CHECK(res.cells[1].lambda == 3.0);
  for (const auto& cell : res.cells) {
    CHECK(cell.ok());
    CHECK(cell.mean_nstar >= 0.0);
    CHECK(cell.mean_nstar <= 1.0);
  }
  REQUIRE(res.best.has_value());
  for (const auto& cell : res.cells) CHECK(res.cells[*res.best].mean_nstar <= cell.mean_nstar);
}

TEST_CASE("a cell with fully precise masses wins") {
  // Duplicated points: prototypes land on them and every mass goes to a singleton.
  std::vector<Object> data;
  for (int i = 0; i < 4; ++i) data.push_back(Object{{0.0, 0.0}});
  for (int i = 0; i < 4; ++i) data.push_back(Object{{10.0, 0.0}});
  auto cfg = quick();
  cfg.lambda = 0.0;
  const auto res = sweep(data, cfg, {1.2, 2.0}, {0.0, 5.0}, 1);
  REQUIRE(res.best.has_value());
  CHECK(res.cells[*res.best].mean_nstar < 1e-6);
  CHECK(res.cells[*res.best].lambda == 0.0);
}

TEST_CASE("failed runs are recorded, not thrown") {
  const std::vector<Object> tiny{Object{{0.0}}, Object{{1.0}}};
  auto cfg = quick();
  cfg.clusters = 3;
  cfg.max_card = 2;
  const auto res = sweep(tiny, cfg, {1.5}, {1.0, 2.0}, 2);
  CHECK_FALSE(res.best.has_value());
  for (const auto& cell : res.cells) {
    CHECK_FALSE(cell.ok());
    CHECK(cell.errors.size() == 2);
  }
  CHECK_THROWS_AS(sweep(tiny, quick(), {}, {1.0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(sweep(tiny, quick(), {1.5}, {1.0}, 0), std::invalid_argument);
}
