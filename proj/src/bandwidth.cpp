#include "errinvar/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "errinvar/error.hpp"
#include "errinvar/parallel.hpp"

namespace errinvar {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sample_sd(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return x.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

// (2 pi)^-1 int |phi_K(t)|^2 / |phi_U(t/h)|^2 dt by the trapezoid rule.
double variance_integral(const KernelSpec& kernel, const ErrorModel& error, double h) {
  constexpr int m = 2048;
  const double r = kernel.support_radius();
  const double dt = 2.0 * r / m;
  double acc = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double t = -r + k * dt;
    const double fk = kernel.fourier_transform(t);
    const double fu = error.charfn(t / h);
    const double v = fk * fk / (fu * fu);
    acc += (k == 0 || k == m) ? 0.5 * v : v;
  }
  return acc * dt / (2.0 * std::numbers::pi);
}

}  // namespace

double density_curvature(std::span<const double> x) {
  const std::size_t n = x.size();
  const double sd = sample_sd(x);
  if (!(sd > 0.0)) throw Error(ErrorCode::DegenerateData, "covariate has zero variance");
  const double g = 1.2407 * sd * std::pow(static_cast<double>(n), -1.0 / 7.0);
  const double s = std::numbers::sqrt2 * g;
  const double c = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * std::pow(s, 5));
  // phi_s''''(d) = s^-5 phi(u) (u^4 - 6u^2 + 3), u = d/s; diagonal terms give 3.
  double off = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double u = (x[i] - x[j]) / s;
      const double u2 = u * u;
      off += std::exp(-0.5 * u2) * (u2 * u2 - 6.0 * u2 + 3.0);
    }
  const double nn = static_cast<double>(n);
  return c * (3.0 * nn + 2.0 * off) / (nn * nn);
}

MiseCurve mise_pilot_curve(std::span<const double> sample_w, const KernelSpec& kernel, const ErrorModel& error,
                           std::span<const double> fpp_source) {
  if (sample_w.empty() || fpp_source.empty()) throw Error(ErrorCode::InsufficientData, "empty input to MISE pilot");
  const double sd = sample_sd(sample_w);
  if (!(sd > 0.0)) throw Error(ErrorCode::DegenerateData, "covariate has zero variance");
  const double n = static_cast<double>(sample_w.size());
  const double base = sd * std::pow(n, -0.2);
  MiseCurve out;
  out.roughness = density_curvature(fpp_source);
  const double mu2 = kernel_moment(kernel, 2);
  constexpr int m = 200;
  const double lo = std::log(0.01 * base), hi = std::log(10.0 * base);
  out.h.resize(m);
  out.mise.resize(m);
  out.best = m;
  for (int i = 0; i < m; ++i) {
    const double h = std::exp(lo + (hi - lo) * i / (m - 1));
    out.h[static_cast<std::size_t>(i)] = h;
    const double var = variance_integral(kernel, error, h) / (n * h);
    const double bias = std::pow(h, 4) / 4.0 * out.roughness * mu2;
    const double v = var + bias;
    out.mise[static_cast<std::size_t>(i)] = std::isfinite(v) ? v : kInf;
    if (std::isfinite(v) && (out.best == m || v < out.mise[out.best])) out.best = static_cast<std::size_t>(i);
  }
  if (out.best == m) throw Error(ErrorCode::BandwidthSearchFailed, "MISE is infinite at every candidate");
  return out;
}

double mise_pilot(std::span<const double> sample_w, const KernelSpec& kernel, const ErrorModel& error,
                  std::span<const double> fpp_source) {
  const auto c = mise_pilot_curve(sample_w, kernel, error, fpp_source);
  return c.h[c.best];
}

double combine_simex_bandwidths(double h1, double h2) { return h1 * h1 / h2; }

double empirical_quantile(std::vector<double> v, double q) {
  if (v.empty()) throw Error(ErrorCode::InsufficientData, "quantile of empty data");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (pos - static_cast<double>(i)) * (v[i + 1] - v[i]);
}

const char* to_string(EstimatorKind k) noexcept { return k == EstimatorKind::HZ ? "hz" : "dfc"; }

PointEstimates corrected_points(EstimatorKind method, const Sample& sample, const KernelSpec& kernel,
                                const ErrorModel& error, double h, int p, std::span<const double> x,
                                const HzOptions& hz, const QuadratureConfig& quad) {
  if (method == EstimatorKind::HZ) return hz_points(sample, kernel, error, h, p, x, hz);
  return dfc_points(sample, kernel, error, h, p, x, quad);
}

namespace {

struct Round {
  // covariates[b][j]: the contaminated values the estimator sees
  const std::vector<std::vector<double>>* observed;
  // targets[b][j]: where the held-out fits are evaluated ("true" covariate)
  const std::vector<std::vector<double>>* truth;
  std::vector<char> keep_flat;  // [b * n + j], weight of the CV term
};

std::vector<double> cv_curve(const Round& round, const Sample& sample, const std::vector<int>& fold,
                             const std::vector<double>& hs, const KernelSpec& kernel, const ErrorModel& error,
                             int p, EstimatorKind method, const CvSimexOptions& opts) {
  const std::size_t n = sample.size();
  const auto B = static_cast<std::size_t>(opts.B);
  const auto delta = static_cast<std::size_t>(opts.delta);
  const std::size_t nh = hs.size();
  // partial[(b * delta + k) * nh + c]: squared-error sum of one fold fit
  std::vector<double> partial(B * delta * nh, 0.0);
  parallel_for(B * delta, [&](std::size_t task) {
    const std::size_t b = task / delta;
    const auto k = static_cast<int>(task % delta);
    Sample train;
    std::vector<double> test_x;
    std::vector<double> test_y;
    for (std::size_t j = 0; j < n; ++j) {
      if (fold[j] == k) {
        if (round.keep_flat[b * n + j]) {
          test_x.push_back((*round.truth)[b][j]);
          test_y.push_back(sample.y[j]);
        }
      } else {
        train.w.push_back((*round.observed)[b][j]);
        train.y.push_back(sample.y[j]);
      }
    }
    for (std::size_t c = 0; c < nh; ++c) {
      double sum = 0.0;
      if (!test_x.empty()) {
        try {
          const auto est = corrected_points(method, train, kernel, error, hs[c], p, test_x, opts.hz, opts.quadrature);
          for (std::size_t i = 0; i < test_x.size(); ++i) {
            const double r = test_y[i] - est.values[i];
            sum += r * r;
          }
        } catch (const Error&) {
          sum = kInf;
        }
      }
      partial[task * nh + c] = std::isfinite(sum) ? sum : kInf;
    }
  });
  std::vector<double> cv(nh, 0.0);
  for (std::size_t task = 0; task < B * delta; ++task)
    for (std::size_t c = 0; c < nh; ++c) cv[c] += partial[task * nh + c];
  for (auto& v : cv) v = std::isfinite(v) ? v / static_cast<double>(n * B) : kInf;
  return cv;
}

struct Search {
  double h = 0.0;
  std::vector<std::pair<double, double>> curve;
  std::pair<double, double> region{};
  bool pushed = false;
};

Search refined_search(const Round& round, const Sample& sample, const std::vector<int>& fold, double pilot,
                      const KernelSpec& kernel, const ErrorModel& error, int p, EstimatorKind method,
                      const CvSimexOptions& opts) {
  Search s;
  s.region = {opts.region_low * pilot, opts.region_high * pilot};
  const auto L = static_cast<std::size_t>(opts.L);
  for (int attempt = 0;; ++attempt) {
    const auto hs = linspace(s.region.first, s.region.second, L);
    const auto cv = cv_curve(round, sample, fold, hs, kernel, error, p, method, opts);
    std::size_t best = L;
    for (std::size_t i = 0; i < L; ++i)
      if (std::isfinite(cv[i]) && (best == L || cv[i] < cv[best])) best = i;
    if (best == L) throw Error(ErrorCode::BandwidthSearchFailed, "cross-validation is non-finite at every candidate");
    s.curve.clear();
    for (std::size_t i = 0; i < L; ++i) s.curve.emplace_back(hs[i], cv[i]);
    s.h = hs[best];
    const bool at_low = best == 0, at_high = best + 1 == L;
    if (attempt > 0 || !(at_low || at_high)) break;
    s.pushed = true;
    if (at_low)
      s.region.first *= 0.5;
    else
      s.region.second *= 2.0;
  }
  return s;
}

}  // namespace

std::vector<char> cv_weights(const std::vector<std::vector<double>>& truth, double q) {
  std::vector<double> pooled;
  for (const auto& row : truth) pooled.insert(pooled.end(), row.begin(), row.end());
  const double lo = empirical_quantile(pooled, q), hi = empirical_quantile(pooled, 1.0 - q);
  std::vector<char> keep;
  keep.reserve(pooled.size());
  for (double v : pooled) keep.push_back(v >= lo && v <= hi ? 1 : 0);
  return keep;
}

BandwidthSearchResult cv_simex_bandwidth(const Sample& sample, const KernelSpec& kernel, const ErrorModel& error,
                                         int p, EstimatorKind method, Rng& rng, const CvSimexOptions& opts) {
  if (opts.B < 1 || opts.L < 2 || opts.delta < 2)
    throw Error(ErrorCode::InvalidParameter, "need B >= 1, L >= 2, delta >= 2");
  if (!(opts.region_low > 0.0) || !(opts.region_high > opts.region_low))
    throw Error(ErrorCode::InvalidParameter, "bad refined search region");
  sample.validate(2);
  const std::size_t n = sample.size();
  if (n < 2 * static_cast<std::size_t>(opts.delta))
    throw Error(ErrorCode::InsufficientData, "need n >= 2 delta observations");
  const auto B = static_cast<std::size_t>(opts.B);

  // All randomness up front, in a fixed order: folds, then U*, then U**.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> fold(n);
  for (std::size_t i = 0; i < n; ++i) fold[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(opts.delta));
  std::vector<std::vector<double>> w1(B, std::vector<double>(n)), w2(B, std::vector<double>(n));
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t j = 0; j < n; ++j) w1[b][j] = sample.w[j] + error.sample(rng);
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t j = 0; j < n; ++j) w2[b][j] = w1[b][j] + error.sample(rng);

  const std::vector<std::vector<double>> w0(B, sample.w);
  std::vector<double> pooled1;
  for (const auto& row : w1) pooled1.insert(pooled1.end(), row.begin(), row.end());

  BandwidthSearchResult res;
  res.B = opts.B;
  res.L = opts.L;
  res.delta = opts.delta;

  res.h_tilde1 = mise_pilot(w1[0], kernel, error, sample.w);
  Round r1{&w1, &w0, cv_weights(w0, opts.weight_quantile)};
  auto s1 = refined_search(r1, sample, fold, res.h_tilde1, kernel, error, p, method, opts);

  res.h_tilde2 = mise_pilot(w2[0], kernel, error, pooled1);
  Round r2{&w2, &w1, cv_weights(w1, opts.weight_quantile)};
  auto s2 = refined_search(r2, sample, fold, res.h_tilde2, kernel, error, p, method, opts);

  res.h1 = s1.h;
  res.h2 = s2.h;
  res.h_hat = combine_simex_bandwidths(res.h1, res.h2);
  res.cv1_curve = std::move(s1.curve);
  res.cv2_curve = std::move(s2.curve);
  res.region1 = s1.region;
  res.region2 = s2.region;
  res.pushed1 = s1.pushed;
  res.pushed2 = s2.pushed;
  return res;
}

}  // namespace errinvar
