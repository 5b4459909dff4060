#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "errinvar/deconv.hpp"
#include "errinvar/kernels.hpp"
#include "errinvar/localpoly.hpp"
#include "errinvar/rng.hpp"

namespace errinvar {

struct MiseCurve {
  std::vector<double> h;
  std::vector<double> mise;  // +inf where the variance term overflows
  double roughness = 0.0;    // estimate of int f''^2
  std::size_t best = 0;
};

// Candidate grid: 200 log-spaced points in [0.01, 10] SD(w) n^-1/5.
MiseCurve mise_pilot_curve(std::span<const double> sample_w, const KernelSpec& kernel, const ErrorModel& error,
                           std::span<const double> fpp_source);
double mise_pilot(std::span<const double> sample_w, const KernelSpec& kernel, const ErrorModel& error,
                  std::span<const double> fpp_source);

// int f''^2 of a Gaussian pilot KDE with normal-reference bandwidth
// g = 1.2407 sd n^-1/7, in closed form.
double density_curvature(std::span<const double> x);

enum class EstimatorKind { HZ, DFC };

struct CvSimexOptions {
  int B = 10;
  int L = 10;
  int delta = 5;
  double region_low = 0.2;   // refined region [low, high] times the pilot
  double region_high = 2.0;
  double weight_quantile = 0.05;  // CV weight keeps [q, 1-q] of the round's covariate
  HzOptions hz;
  QuadratureConfig quadrature;
};

struct BandwidthSearchResult {
  double h_hat = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double h_tilde1 = 0.0;
  double h_tilde2 = 0.0;
  std::vector<std::pair<double, double>> cv1_curve;
  std::vector<std::pair<double, double>> cv2_curve;
  int B = 0;
  int L = 0;
  int delta = 0;
  std::pair<double, double> region1{}, region2{};
  bool pushed1 = false, pushed2 = false;
};

double combine_simex_bandwidths(double h1, double h2);

BandwidthSearchResult cv_simex_bandwidth(const Sample& sample, const KernelSpec& kernel, const ErrorModel& error,
                                         int p, EstimatorKind method, Rng& rng, const CvSimexOptions& opts = {});

// Point estimates with either corrected estimator.
PointEstimates corrected_points(EstimatorKind method, const Sample& sample, const KernelSpec& kernel,
                                const ErrorModel& error, double h, int p, std::span<const double> x,
                                const HzOptions& hz = {}, const QuadratureConfig& quad = {});

// CV weight per pooled entry of truth[b][j] (index b * n + j): 1 inside the
// [q, 1-q] empirical quantiles of all entries, 0 outside.
std::vector<char> cv_weights(const std::vector<std::vector<double>>& truth, double q);

// Type-7 empirical quantile.
double empirical_quantile(std::vector<double> values, double q);

const char* to_string(EstimatorKind k) noexcept;

}  // namespace errinvar
