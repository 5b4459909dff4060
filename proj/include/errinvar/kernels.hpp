#pragma once

#include <memory>
#include <span>
#include <vector>

#include "errinvar/fourier.hpp"
#include "errinvar/rng.hpp"

namespace errinvar {

// Kernel with compactly supported Fourier transform phi_K, polynomial on its
// support. Derivatives are exact polynomial derivatives.
class KernelSpec {
 public:
  // phi_coeffs[m] multiplies t^m on [-support, support].
  KernelSpec(std::vector<double> phi_coeffs, double support_radius, int max_derivative_order);

  double fourier_transform(double t) const { return fourier_derivative(0, t); }
  // Throws UnsupportedOrder if order is negative or above max_derivative_order().
  double fourier_derivative(int order, double t) const;
  double support_radius() const { return support_; }
  int max_derivative_order() const { return max_order_; }

  // Time-domain K(u) = (2 pi)^-1 int e^{-itu} phi_K(t) dt, tabulated once by
  // icft on the default grid.
  double time_domain(double u) const { return (*time_table_)(u); }
  const HermiteTable& time_table() const { return *time_table_; }

 private:
  std::vector<std::vector<double>> coeffs_;  // coeffs_[order][power]
  double support_;
  int max_order_;
  std::shared_ptr<const HermiteTable> time_table_;
};

// phi_K(t) = (1 - t^2)^8 on [-1, 1].
const KernelSpec& sinc_family_kernel();

// mu_ell = int u^ell K(u) du = i^{-ell} phi_K^(ell)(0).
double kernel_moment(const KernelSpec& kernel, int ell);

enum class ErrorFamily { None, Gaussian, Laplace, Empirical };
enum class SmoothnessClass { OrdinarySmooth, SuperSmooth };

struct Smoothness {
  SmoothnessClass kind = SmoothnessClass::OrdinarySmooth;
  double order = 0.0;
};

class ErrorModel {
 public:
  ErrorModel() = default;

  static ErrorModel none();
  static ErrorModel laplace(double sigma_u);
  static ErrorModel gaussian(double sigma_u);
  // Charfn tabulated on t_nodes (linear interpolation, edge value beyond);
  // the sampler resamples `draws` with a random sign.
  static ErrorModel empirical(std::vector<double> t_nodes, std::vector<double> charfn_values,
                              std::vector<double> draws, double sigma_u);

  ErrorFamily family() const { return family_; }
  double sigma_u() const { return sigma_; }
  Smoothness smoothness() const { return smooth_; }
  double charfn(double t) const;
  double sample(Rng& rng) const;
  void sample(Rng& rng, std::span<double> out) const;

 private:
  ErrorFamily family_ = ErrorFamily::None;
  double sigma_ = 0.0;
  Smoothness smooth_{};
  std::shared_ptr<const std::vector<double>> t_nodes_, table_, draws_;
};

ErrorModel laplace_error(double sigma_u);
ErrorModel gaussian_error(double sigma_u);
ErrorModel no_error();

const char* to_string(ErrorFamily family) noexcept;

}  // namespace errinvar
