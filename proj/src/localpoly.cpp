#include "errinvar/localpoly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "errinvar/error.hpp"

namespace errinvar {

constexpr int kMaxOrder = 7;

void Sample::validate(std::size_t min_n) const {
  if (y.size() != w.size()) throw Error(ErrorCode::DataFormatError, "y and w lengths differ");
  if (w.size() < min_n)
    throw Error(ErrorCode::InsufficientData,
                "need at least " + std::to_string(min_n) + " observations, got " + std::to_string(w.size()));
  for (std::size_t j = 0; j < w.size(); ++j)
    if (!std::isfinite(w[j]) || !std::isfinite(y[j]))
      throw Error(ErrorCode::DataFormatError, "non-finite value in row " + std::to_string(j));
  if (replicates) {
    if (replicates->size() != w.size()) throw Error(ErrorCode::DataFormatError, "replicate count differs from n");
    for (std::size_t j = 0; j < w.size(); ++j) {
      const auto& r = (*replicates)[j];
      if (!std::isfinite(r[0]) || !std::isfinite(r[1]))
        throw Error(ErrorCode::DataFormatError, "non-finite replicate in row " + std::to_string(j));
      const double mean = 0.5 * (r[0] + r[1]);
      if (std::abs(mean - w[j]) > 1e-12 * std::max(1.0, std::abs(mean)))
        throw Error(ErrorCode::DataFormatError, "w is not the replicate mean in row " + std::to_string(j));
    }
  }
}

Sample Sample::from_replicates(std::vector<double> y, std::span<const double> w1, std::span<const double> w2) {
  if (w1.size() != w2.size() || w1.size() != y.size())
    throw Error(ErrorCode::DataFormatError, "replicate columns and y lengths differ");
  Sample s;
  s.y = std::move(y);
  s.w.resize(w1.size());
  s.replicates.emplace(w1.size());
  for (std::size_t j = 0; j < w1.size(); ++j) {
    s.w[j] = 0.5 * (w1[j] + w2[j]);
    (*s.replicates)[j] = {w1[j], w2[j]};
  }
  return s;
}

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::Naive: return "naive";
    case Method::DFC: return "dfc";
    case Method::HZ: return "hz";
    case Method::ErrorFree: return "errorfree";
  }
  return "unknown";
}

std::size_t CurveEstimate::clamped_count() const {
  return static_cast<std::size_t>(std::count(clamped.begin(), clamped.end(), true));
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {a};
  std::vector<double> x(n);
  const double step = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = a + static_cast<double>(i) * step;
  x.back() = b;
  return x;
}

void require_increasing_grid(std::span<const double> x) {
  if (x.empty()) throw Error(ErrorCode::InvalidParameter, "evaluation grid is empty");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) throw Error(ErrorCode::InvalidParameter, "evaluation grid has non-finite point");
    if (i > 0 && !(x[i] > x[i - 1]))
      throw Error(ErrorCode::InvalidParameter, "evaluation grid must be strictly increasing");
  }
}

LocalSolve solve_local_system(std::span<const double> s, std::span<const double> t, int p) {
  if (p == 0) {
    if (s[0] != 0.0 && std::isfinite(s[0])) {
      const double v = t[0] / s[0];
      if (std::isfinite(v)) return {v, false};
    }
    return {0.0, true};
  }
  using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxOrder + 1, kMaxOrder + 1>;
  using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxOrder + 1, 1>;
  const int m = p + 1;
  Mat S(m, m);
  Vec T(m);
  for (int i = 0; i < m; ++i) {
    T(i) = t[static_cast<std::size_t>(i)];
    for (int j = 0; j < m; ++j) S(i, j) = s[static_cast<std::size_t>(i + j)];
  }
  if (S.allFinite() && T.allFinite()) {
    Eigen::PartialPivLU<Mat> lu(S);
    // rcond() is only an estimate and reports 1 for some exactly singular
    // matrices; max/min |U_ii| bounds the condition number from below.
    const auto piv = lu.matrixLU().diagonal().cwiseAbs();
    const double pivot_ratio = piv.minCoeff() / piv.maxCoeff();
    if (lu.rcond() >= 1e-12 && pivot_ratio >= 1e-12) {
      const double v = lu.solve(T)(0);
      if (std::isfinite(v)) return {v, false};
    }
  }
  const double eps =
      std::max(1e-10 * std::abs(S.trace()) / m, std::numeric_limits<double>::min());
  Mat R = S;
  R.diagonal().array() += eps;
  double v = std::numeric_limits<double>::quiet_NaN();
  if (R.allFinite() && T.allFinite()) v = Eigen::PartialPivLU<Mat>(R).solve(T)(0);
  return {std::isfinite(v) ? v : 0.0, true};
}

OrderedData canonical_order(const Sample& sample) {
  std::vector<std::size_t> idx(sample.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return sample.w[a] != sample.w[b] ? sample.w[a] < sample.w[b] : sample.y[a] < sample.y[b];
  });
  OrderedData d;
  d.w.reserve(idx.size());
  d.y.reserve(idx.size());
  for (auto i : idx) {
    d.w.push_back(sample.w[i]);
    d.y.push_back(sample.y[i]);
  }
  return d;
}

LocalPolySmoother::LocalPolySmoother(const Sample& sample, const KernelSpec& kernel, double h, int p)
    : kernel_(&kernel), h_(h), p_(p) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidBandwidth, "bandwidth must be positive");
  if (p < 0 || p > kMaxOrder)
    throw Error(ErrorCode::InvalidParameter, "order p must lie in [0, " + std::to_string(kMaxOrder) + "]");
  sample.validate(1);
  if (sample.size() < static_cast<std::size_t>(p) + 1)
    throw Error(ErrorCode::InsufficientData, "need at least p+1 observations");
  auto data = canonical_order(sample);
  w_ = std::move(data.w);
  y_ = std::move(data.y);
  const auto& tab = kernel.time_table();
  reach_ = std::max(-tab.x0(), tab.x_end()) * h;
}

void LocalPolySmoother::accumulate(double x, std::vector<double>& s, std::vector<double>& t) const {
  const auto nl = static_cast<std::size_t>(2 * p_ + 1);
  s.assign(nl, 0.0);
  t.assign(static_cast<std::size_t>(p_ + 1), 0.0);
  auto lo = std::lower_bound(w_.begin(), w_.end(), x - reach_) - w_.begin();
  auto hi = std::upper_bound(w_.begin(), w_.end(), x + reach_) - w_.begin();
  const double inv_h = 1.0 / h_;
  for (auto j = lo; j < hi; ++j) {
    const double u = (w_[j] - x) * inv_h;
    double k = kernel_->time_domain(u) * inv_h;
    const double yk = y_[j];
    for (std::size_t l = 0; l < nl; ++l) {
      s[l] += k;
      if (l <= static_cast<std::size_t>(p_)) t[l] += yk * k;
      k *= u;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(w_.size());
  for (auto& v : s) v *= inv_n;
  for (auto& v : t) v *= inv_n;
}

LocalPolySmoother::Point LocalPolySmoother::evaluate(double x) const {
  std::vector<double> s, t;
  accumulate(x, s, t);
  const auto r = solve_local_system(s, t, p_);
  return {r.value, s[0], t[0], r.clamped};
}

LocalPolySmoother::Point LocalPolySmoother::leave_one_out(std::size_t i) const {
  std::vector<double> s, t;
  accumulate(w_[i], s, t);
  // The held-out point sits at u = 0, so it only enters S_0 and T_0.
  const double k0 = kernel_->time_domain(0.0) / (h_ * static_cast<double>(w_.size()));
  s[0] -= k0;
  t[0] -= y_[i] * k0;
  const auto r = solve_local_system(s, t, p_);
  return {r.value, s[0], t[0], r.clamped};
}

CurveEstimate local_poly_fit(const Sample& sample, const KernelSpec& kernel, double h, int p,
                             std::span<const double> x_grid) {
  require_increasing_grid(x_grid);
  const LocalPolySmoother sm(sample, kernel, h, p);
  CurveEstimate est;
  est.x_grid.assign(x_grid.begin(), x_grid.end());
  est.values.resize(x_grid.size());
  est.clamped.resize(x_grid.size());
  est.bandwidth = h;
  est.order = p;
  est.method = Method::Naive;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const auto pt = sm.evaluate(x_grid[i]);
    est.values[i] = pt.value;
    est.clamped[i] = pt.clamped;
  }
  return est;
}

std::vector<double> kde(const Sample& sample, const KernelSpec& kernel, double h,
                        std::span<const double> x_grid) {
  const LocalPolySmoother sm(sample, kernel, h, 0);
  std::vector<double> out(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) out[i] = sm.evaluate(x_grid[i]).s0;
  return out;
}

std::vector<double> errorfree_cv_curve(const Sample& sample, const KernelSpec& kernel, int p,
                                       std::span<const double> candidates) {
  sample.validate(2);
  std::vector<double> cv(candidates.size(), std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const double h = candidates[c];
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidBandwidth, "candidate bandwidth must be positive");
    const LocalPolySmoother sm(sample, kernel, h, p);
    double sum = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < sample.size() && ok; ++i) {
      const auto pt = sm.leave_one_out(i);
      const double r = sm.sorted_y()[i] - pt.value;
      ok = !pt.clamped && std::isfinite(r);
      sum += r * r;
    }
    if (ok && std::isfinite(sum)) cv[c] = sum / static_cast<double>(sample.size());
  }
  return cv;
}

double errorfree_cv_bandwidth(const Sample& sample, const KernelSpec& kernel, int p,
                              std::span<const double> candidates) {
  if (candidates.empty()) throw Error(ErrorCode::InvalidParameter, "no candidate bandwidths");
  std::vector<double> hs(candidates.begin(), candidates.end());
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  const auto cv = errorfree_cv_curve(sample, kernel, p, hs);
  std::size_t best = hs.size();
  for (std::size_t i = 0; i < hs.size(); ++i)
    if (std::isfinite(cv[i]) && (best == hs.size() || cv[i] < cv[best])) best = i;
  if (best == hs.size()) throw Error(ErrorCode::NoValidBandwidth, "every candidate bandwidth gave a degenerate fit");
  return hs[best];
}

}  // namespace errinvar
