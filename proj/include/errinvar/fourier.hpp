#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace errinvar {

using cplx = std::complex<double>;

// Paired time/frequency grids s_g = (g - G/2) alpha1, t_k = (k - G/2) alpha2
// with alpha1 * alpha2 = 2 pi / G.
struct FourierGrid {
  std::size_t G = 0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  std::vector<double> s_nodes;
  std::vector<double> t_nodes;

  // Throws InvalidParameter unless G is a power of two with G/2 even and alpha1 > 0.
  static FourierGrid make(std::size_t G, double alpha1);
  // alpha1 = alpha2 = sqrt(2 pi / G).
  static FourierGrid symmetric(std::size_t G);

  double extent() const { return static_cast<double>(G) * alpha1; }
  double t_max() const { return static_cast<double>(G / 2) * alpha2; }
};

// G = 2^16, alpha1 = alpha2. Built once, shared.
std::shared_ptr<const FourierGrid> default_grid();

enum class Domain { Time, Frequency };

struct GridFunction {
  std::shared_ptr<const FourierGrid> grid;
  std::vector<cplx> values;
  Domain domain = Domain::Time;
};

// F[f](t_k) = int f(s) exp(-i t_k s) ds via the sign-modulated DFT.
GridFunction cft(const GridFunction& f);
// (2 pi)^-1 int phi(t) exp(+i t s_g) dt, the exact inverse of cft.
// For even phi this coincides with the exp(-itx) form.
GridFunction icft(const GridFunction& phi);
// icft evaluated off-grid. Values and first derivatives come from two FFTs,
// then cubic Hermite interpolation; exact at the nodes.
std::vector<cplx> icft_at(const GridFunction& phi, std::span<const double> x);

// out[j] = sum_k a[k] exp(-i (t0 + k dt)(x0 + j dx)), j < m, by chirp-z.
std::vector<cplx> chirp_fourier_sum(std::span<const cplx> a, double t0, double dt, double x0,
                                    double dx, std::size_t m);

// Uniformly tabulated function with derivative table; cubic Hermite inside
// [x0, x0 + (n-1) dx], zero outside.
class HermiteTable {
 public:
  HermiteTable() = default;
  HermiteTable(double x0, double dx, std::vector<double> values, std::vector<double> derivs);

  double operator()(double x) const {
    const double r = (x - x0_) * inv_dx_;
    if (!(r >= 0.0) || r > last_) return 0.0;
    auto i = static_cast<std::size_t>(r);
    if (i + 1 >= v_.size()) i = v_.size() - 2;
    const double s = r - static_cast<double>(i);
    const double s2 = s * s;
    const double t = 1.0 - s;
    const double t2 = t * t;
    return (1.0 + 2.0 * s) * t2 * v_[i] + s * t2 * dx_ * d_[i] + s2 * (3.0 - 2.0 * s) * v_[i + 1] -
           s2 * t * dx_ * d_[i + 1];
  }

  double x0() const { return x0_; }
  double dx() const { return dx_; }
  double x_end() const { return x0_ + last_ * dx_; }
  const std::vector<double>& values() const { return v_; }
  const std::vector<double>& derivatives() const { return d_; }

 private:
  double x0_ = 0.0, dx_ = 1.0, inv_dx_ = 1.0, last_ = 0.0;
  std::vector<double> v_, d_;
};

}  // namespace errinvar
