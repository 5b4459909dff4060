#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "errinvar/fourier.hpp"
#include "errinvar/kernels.hpp"
#include "errinvar/localpoly.hpp"

namespace errinvar {

struct QuadratureConfig {
  std::size_t t_nodes = 4096;   // trapezoid nodes on the kernel's frequency support
  std::size_t x_points = 4096;  // tabulation points
  double x_half_range = 50.0;   // table covers [-x_half_range, x_half_range], zero beyond
};

// Below this |phi_U| inside the band the deconvolution is refused.
inline constexpr double kCharfnFloor = 1e-12;

// K_{U,l}(x) = i^-l (2 pi)^-1 int e^{-itx} phi_K^(l)(t) / phi_U(-t/h) dt.
struct TransformedKernel {
  int ell = 0;
  double h = 0.0;
  HermiteTable table;
  double max_imag = 0.0;  // largest discarded imaginary part before normalising

  double operator()(double x) const { return table(x); }
};

TransformedKernel transformed_kernel(const KernelSpec& kernel, const ErrorModel& error, int ell, double h,
                                     const QuadratureConfig& cfg = {});

// f_X-hat(x) = (nh)^-1 sum K_{U,0}((x - W_j)/h) at arbitrary points.
std::vector<double> deconv_kde(const Sample& sample, const KernelSpec& kernel, const ErrorModel& error,
                               double h, std::span<const double> x, const QuadratureConfig& cfg = {});

struct HzOptions {
  // Between these distances (in bandwidths) from the nearest observation the
  // order-p product on the transform grid fades into the local-constant one;
  // p = 0 is unaffected. Only the error correction sees the blend.
  double blend_inner = 2.0;
  double blend_outer = 5.0;
  // Denominator floor as a fraction of its maximum over the evaluation points.
  double density_floor = 0.01;
  // Division by phi_U happens on |t| <= band / h.
  double band = 1.0;
  // Transform grid in bandwidth-scaled coordinates; null means default_grid().
  std::shared_ptr<const FourierGrid> grid;
  QuadratureConfig quadrature;
};

struct PointEstimates {
  std::vector<double> values;
  std::vector<bool> clamped;
};

PointEstimates dfc_points(const Sample& sample, const KernelSpec& kernel, const ErrorModel& error, double h,
                          int p, std::span<const double> x, const QuadratureConfig& cfg = {});
PointEstimates hz_points(const Sample& sample, const KernelSpec& kernel, const ErrorModel& error, double h,
                         int p, std::span<const double> x, const HzOptions& opts = {});

CurveEstimate dfc_estimate(const Sample& sample, const KernelSpec& kernel, const ErrorModel& error, double h,
                           int p, std::span<const double> x_grid, const QuadratureConfig& cfg = {});
CurveEstimate hz_estimate(const Sample& sample, const KernelSpec& kernel, const ErrorModel& error, double h,
                          int p, std::span<const double> x_grid, const HzOptions& opts = {});

}  // namespace errinvar
