#include <cmath>
#include <exception>
#include <stdexcept>

#include "softecm/soft_ecm.hpp"

namespace softecm {

std::vector<double> default_beta_grid() {
  std::vector<double> grid;
  for (int k = 11; k <= 20; ++k) grid.push_back(k / 10.0);
  return grid;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 10; ++k) grid.push_back(static_cast<double>(k));
  return grid;
}

SweepResult sweep(std::span<const Object> data, const SoftEcmConfig& cfg, const std::vector<double>& beta_grid,
                  const std::vector<double>& lambda_grid, int runs_per_cell) {
  if (beta_grid.empty() || lambda_grid.empty()) throw std::invalid_argument("sweep grids must be non-empty");
  if (runs_per_cell < 1) throw std::invalid_argument("runs per cell must be >= 1");

  SweepResult result;
  std::size_t cell_index = 0;
  for (double beta : beta_grid) {
    for (double lambda : lambda_grid) {
      SweepCell cell;
      cell.beta = beta;
      cell.lambda = lambda;
      for (int r = 0; r < runs_per_cell; ++r) {
        SoftEcmConfig run_cfg = cfg;
        run_cfg.beta = beta;
        run_cfg.lambda = lambda;
        run_cfg.seed = cfg.seed + cell_index * static_cast<std::uint64_t>(runs_per_cell) + static_cast<std::uint64_t>(r);
        try {
          const FitResult fitted = fit(data, run_cfg);
          cell.nstar.push_back(normalized_specificity(fitted.partition));
        } catch (const std::exception& e) {
          cell.errors.emplace_back(e.what());
        }
      }
      if (cell.ok()) {
        double sum = 0.0;
        for (double v : cell.nstar) sum += v;
        cell.mean_nstar = sum / static_cast<double>(cell.nstar.size());
        double var = 0.0;
        for (double v : cell.nstar) var += (v - cell.mean_nstar) * (v - cell.mean_nstar);
        cell.std_nstar = std::sqrt(var / static_cast<double>(cell.nstar.size()));
      }
      result.cells.push_back(std::move(cell));
      ++cell_index;
    }
  }

  for (std::size_t k = 0; k < result.cells.size(); ++k) {
    const auto& cell = result.cells[k];
    if (!cell.ok()) continue;
    if (!result.best) {
      result.best = k;
      continue;
    }
    const auto& best = result.cells[*result.best];
    const bool better = cell.mean_nstar < best.mean_nstar ||
                        (cell.mean_nstar == best.mean_nstar &&
                         (cell.lambda < best.lambda || (cell.lambda == best.lambda && cell.beta < best.beta)));
    if (better) result.best = k;
  }
  return result;
}

}  // namespace softecm
