#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "errinvar/kernels.hpp"

namespace errinvar {

struct Sample {
  std::vector<double> y;
  std::vector<double> w;
  // (W_j1, W_j2); when present w[j] is their mean.
  std::optional<std::vector<std::array<double, 2>>> replicates;

  std::size_t size() const { return w.size(); }
  // DataFormatError on length mismatch, non-finite values or replicate/mean
  // disagreement; InsufficientData when n < min_n.
  void validate(std::size_t min_n = 2) const;

  static Sample from_replicates(std::vector<double> y, std::span<const double> w1,
                                std::span<const double> w2);
};

enum class Method { Naive, DFC, HZ, ErrorFree };
const char* to_string(Method m) noexcept;

struct CurveEstimate {
  std::vector<double> x_grid;
  std::vector<double> values;
  double bandwidth = 0.0;
  int order = 0;
  std::vector<bool> clamped;
  Method method = Method::Naive;

  std::size_t clamped_count() const;
};

// n equally spaced points from a to b inclusive.
std::vector<double> linspace(double a, double b, std::size_t n);

// InvalidParameter unless x is non-empty, finite and strictly increasing.
void require_increasing_grid(std::span<const double> x);

// e1' S^-1 T for the Hankel system S[i][j] = s[i+j], i, j <= p. Ridge
// eps I with eps = 1e-10 |trace| / (p+1) when S is ill-conditioned.
struct LocalSolve {
  double value;
  bool clamped;
};
LocalSolve solve_local_system(std::span<const double> s, std::span<const double> t, int p);

// Data sorted by (w, y). Every estimator sums in this order, which makes the
// output independent of the caller's row order.
struct OrderedData {
  std::vector<double> w, y;
};
OrderedData canonical_order(const Sample& sample);

// Order-p local polynomial smoother on (W, Y), data held in (w, y) order so
// results do not depend on the caller's ordering.
class LocalPolySmoother {
 public:
  LocalPolySmoother(const Sample& sample, const KernelSpec& kernel, double h, int p);

  struct Point {
    double value;  // m-hat at x
    double s0;     // n^-1 sum K_h(W_j - x), the density estimate
    double t0;     // n^-1 sum Y_j K_h(W_j - x)
    bool clamped;
  };
  Point evaluate(double x) const;

  // Fit at W_i with observation i removed (i indexes the sorted data).
  Point leave_one_out(std::size_t i) const;

  const std::vector<double>& sorted_w() const { return w_; }
  const std::vector<double>& sorted_y() const { return y_; }
  double bandwidth() const { return h_; }
  int order() const { return p_; }

 private:
  void accumulate(double x, std::vector<double>& s, std::vector<double>& t) const;

  const KernelSpec* kernel_;
  double h_;
  int p_;
  double reach_;
  std::vector<double> w_, y_;
};

CurveEstimate local_poly_fit(const Sample& sample, const KernelSpec& kernel, double h, int p,
                             std::span<const double> x_grid);

std::vector<double> kde(const Sample& sample, const KernelSpec& kernel, double h,
                        std::span<const double> x_grid);

// Leave-one-out CV over candidates; ties go to the smaller h.
double errorfree_cv_bandwidth(const Sample& sample, const KernelSpec& kernel, int p,
                              std::span<const double> candidates);

// CV(h) for each candidate as used above; +inf marks a degenerate fit.
std::vector<double> errorfree_cv_curve(const Sample& sample, const KernelSpec& kernel, int p,
                                       std::span<const double> candidates);

}  // namespace errinvar
