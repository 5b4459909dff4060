#include "errinvar/errormodel.hpp"

#include <algorithm>
#include <cmath>

#include "errinvar/error.hpp"

namespace errinvar {
namespace {

const std::vector<std::array<double, 2>>& replicates_of(const Sample& sample) {
  if (!sample.replicates) throw Error(ErrorCode::MissingReplicates, "replicate measurements are required");
  sample.validate(1);
  return *sample.replicates;
}

constexpr double kDhmFloor = 1e-6;

}  // namespace

double estimate_sigma2_from_replicates(const Sample& sample) {
  const auto& r = replicates_of(sample);
  double acc = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    // Both deviations from the mean have magnitude |W_j1 - W_j2| / 2.
    const double half = 0.5 * (r[j][0] - r[j][1]);
    acc += 2.0 * half * half;
  }
  return acc / (2.0 * static_cast<double>(r.size()));
}

ErrorModel estimate_charfn_dhm(const Sample& sample, const FourierGrid& grid) {
  const auto& r = replicates_of(sample);
  if (r.size() < 10) throw Error(ErrorCode::InsufficientData, "characteristic function estimate needs n >= 10");
  const std::size_t G = grid.G;
  const std::size_t mid = G / 2;  // t_nodes[mid] == 0
  std::vector<double> half_diff(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) half_diff[j] = 0.5 * (r[j][0] - r[j][1]);

  // cos(t_k d/2) for t_k = (k - mid) alpha2, k >= mid, by rotation; the exact
  // phase is restored every 512 steps to stop drift.
  std::vector<double> acc(G - mid, 0.0);
  for (double d : half_diff) {
    const std::complex<double> step = std::polar(1.0, grid.alpha2 * d);
    std::complex<double> z = 1.0;
    for (std::size_t k = 0; k < acc.size(); ++k) {
      if (k % 512 == 0) z = std::polar(1.0, static_cast<double>(k) * grid.alpha2 * d);
      acc[k] += z.real();
      z *= step;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(r.size());
  std::vector<double> table(G);
  for (std::size_t k = 0; k < acc.size(); ++k) {
    // phi_U1(t/2) = sqrt(max(m, floor)) and phi_U = phi_U1(t/2)^2.
    const double v = std::max(acc[k] * inv_n, kDhmFloor);
    table[mid + k] = v;
    if (k > 0 && k <= mid) table[mid - k] = v;
  }
  table[0] = table[1];  // t_0 = -t_max has no mirror on the grid
  return ErrorModel::empirical(grid.t_nodes, std::move(table), std::move(half_diff),
                               std::sqrt(estimate_sigma2_from_replicates(sample)));
}

double reliability_ratio(double var_x, double sigma2_u) {
  if (!(var_x > 0.0)) throw Error(ErrorCode::InvalidParameter, "var_x must be positive");
  if (!(sigma2_u >= 0.0)) throw Error(ErrorCode::InvalidParameter, "sigma2_u must be >= 0");
  return var_x / (var_x + sigma2_u);
}

double sigma2_for_reliability(double var_x, double lambda) {
  if (!(var_x > 0.0)) throw Error(ErrorCode::InvalidParameter, "var_x must be positive");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw Error(ErrorCode::InvalidParameter, "lambda must lie in (0, 1]");
  return var_x * (1.0 / lambda - 1.0);
}

}  // namespace errinvar
