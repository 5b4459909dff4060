#include "errinvar/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "errinvar/error.hpp"

namespace errinvar {
namespace {

std::shared_ptr<const HermiteTable> tabulate_time_domain(const KernelSpec& k) {
  const auto grid = default_grid();
  GridFunction phi{grid, std::vector<cplx>(grid->G), Domain::Frequency};
  GridFunction dphi = phi;
  for (std::size_t i = 0; i < grid->G; ++i) {
    const double t = grid->t_nodes[i];
    const double v = k.fourier_transform(t);
    phi.values[i] = v;
    dphi.values[i] = cplx(0.0, t * v);
  }
  const auto v = icft(phi).values;
  const auto d = icft(dphi).values;
  std::vector<double> vr(grid->G), dr(grid->G);
  for (std::size_t i = 0; i < grid->G; ++i) {
    vr[i] = v[i].real();
    dr[i] = d[i].real();
  }
  return std::make_shared<const HermiteTable>(grid->s_nodes.front(), grid->alpha1, std::move(vr),
                                              std::move(dr));
}

}  // namespace

KernelSpec::KernelSpec(std::vector<double> phi_coeffs, double support_radius, int max_derivative_order)
    : support_(support_radius), max_order_(max_derivative_order) {
  if (phi_coeffs.empty() || !(support_radius > 0.0) || max_derivative_order < 0)
    throw Error(ErrorCode::InvalidParameter, "bad kernel definition");
  coeffs_.push_back(std::move(phi_coeffs));
  for (int r = 1; r <= max_order_; ++r) {
    const auto& prev = coeffs_.back();
    std::vector<double> next(prev.size() > 1 ? prev.size() - 1 : 1, 0.0);
    for (std::size_t m = 1; m < prev.size(); ++m) next[m - 1] = static_cast<double>(m) * prev[m];
    coeffs_.push_back(std::move(next));
  }
  time_table_ = tabulate_time_domain(*this);
}

double KernelSpec::fourier_derivative(int order, double t) const {
  if (order < 0 || order > max_order_)
    throw Error(ErrorCode::UnsupportedOrder, "kernel derivative order " + std::to_string(order) +
                                                 " exceeds " + std::to_string(max_order_));
  if (std::abs(t) > support_) return 0.0;
  const auto& c = coeffs_[static_cast<std::size_t>(order)];
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

const KernelSpec& sinc_family_kernel() {
  static const KernelSpec kernel = [] {
    std::vector<double> c(17, 0.0);
    double binom = 1.0;
    for (int m = 0; m <= 8; ++m) {
      c[static_cast<std::size_t>(2 * m)] = (m % 2 ? -binom : binom);
      binom = binom * (8 - m) / (m + 1);
    }
    return KernelSpec(std::move(c), 1.0, 6);
  }();
  return kernel;
}

double kernel_moment(const KernelSpec& kernel, int ell) {
  const double d = kernel.fourier_derivative(ell, 0.0);
  if (ell % 2) return 0.0;
  return (ell / 2) % 2 ? -d : d;
}

ErrorModel ErrorModel::none() { return {}; }

ErrorModel ErrorModel::laplace(double sigma_u) {
  if (!(sigma_u >= 0.0) || !std::isfinite(sigma_u))
    throw Error(ErrorCode::InvalidParameter, "sigma_u must be >= 0");
  ErrorModel m;
  m.family_ = ErrorFamily::Laplace;
  m.sigma_ = sigma_u;
  m.smooth_ = {SmoothnessClass::OrdinarySmooth, 2.0};
  return m;
}

ErrorModel ErrorModel::gaussian(double sigma_u) {
  if (!(sigma_u >= 0.0) || !std::isfinite(sigma_u))
    throw Error(ErrorCode::InvalidParameter, "sigma_u must be >= 0");
  ErrorModel m;
  m.family_ = ErrorFamily::Gaussian;
  m.sigma_ = sigma_u;
  m.smooth_ = {SmoothnessClass::SuperSmooth, 2.0};
  return m;
}

ErrorModel ErrorModel::empirical(std::vector<double> t_nodes, std::vector<double> charfn_values,
                                 std::vector<double> draws, double sigma_u) {
  if (t_nodes.size() < 2 || t_nodes.size() != charfn_values.size())
    throw Error(ErrorCode::InvalidParameter, "empirical charfn table needs matching nodes and values");
  if (!std::is_sorted(t_nodes.begin(), t_nodes.end()))
    throw Error(ErrorCode::InvalidParameter, "empirical charfn nodes must be increasing");
  ErrorModel m;
  m.family_ = ErrorFamily::Empirical;
  m.sigma_ = sigma_u;
  m.t_nodes_ = std::make_shared<const std::vector<double>>(std::move(t_nodes));
  m.table_ = std::make_shared<const std::vector<double>>(std::move(charfn_values));
  m.draws_ = std::make_shared<const std::vector<double>>(std::move(draws));
  return m;
}

double ErrorModel::charfn(double t) const {
  switch (family_) {
    case ErrorFamily::None:
      return 1.0;
    case ErrorFamily::Laplace:
      return 1.0 / (1.0 + 0.5 * sigma_ * sigma_ * t * t);
    case ErrorFamily::Gaussian:
      return std::exp(-0.5 * sigma_ * sigma_ * t * t);
    case ErrorFamily::Empirical: {
      const auto& tn = *t_nodes_;
      const auto& v = *table_;
      if (t <= tn.front()) return v.front();
      if (t >= tn.back()) return v.back();
      const auto hi = static_cast<std::size_t>(std::upper_bound(tn.begin(), tn.end(), t) - tn.begin());
      const std::size_t lo = hi - 1;
      const double s = (t - tn[lo]) / (tn[hi] - tn[lo]);
      return v[lo] + s * (v[hi] - v[lo]);
    }
  }
  return 1.0;
}

double ErrorModel::sample(Rng& rng) const {
  switch (family_) {
    case ErrorFamily::None:
      return 0.0;
    case ErrorFamily::Laplace: {
      const double b = sigma_ / std::numbers::sqrt2;
      double r = uniform01(rng);
      while (r == 0.0) r = uniform01(rng);
      const double u = r - 0.5;
      return u < 0 ? b * std::log1p(2.0 * u) : -b * std::log1p(-2.0 * u);
    }
    case ErrorFamily::Gaussian:
      return sigma_ * standard_normal(rng);
    case ErrorFamily::Empirical: {
      const auto& d = *draws_;
      if (d.empty()) return 0.0;
      const auto idx = std::uniform_int_distribution<std::size_t>(0, d.size() - 1)(rng);
      return uniform01(rng) < 0.5 ? -d[idx] : d[idx];
    }
  }
  return 0.0;
}

void ErrorModel::sample(Rng& rng, std::span<double> out) const {
  for (auto& v : out) v = sample(rng);
}

ErrorModel laplace_error(double sigma_u) { return ErrorModel::laplace(sigma_u); }
ErrorModel gaussian_error(double sigma_u) { return ErrorModel::gaussian(sigma_u); }
ErrorModel no_error() { return ErrorModel::none(); }

const char* to_string(ErrorFamily family) noexcept {
  switch (family) {
    case ErrorFamily::None: return "none";
    case ErrorFamily::Gaussian: return "gaussian";
    case ErrorFamily::Laplace: return "laplace";
    case ErrorFamily::Empirical: return "empirical";
  }
  return "unknown";
}

}  // namespace errinvar
