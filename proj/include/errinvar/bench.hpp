#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errinvar/bandwidth.hpp"
#include "errinvar/deconv.hpp"
#include "errinvar/kernels.hpp"
#include "errinvar/localpoly.hpp"
#include "errinvar/rng.hpp"
#include "json.hpp"

namespace errinvar {

enum class ConfigId { C1, C2, C3, C4 };

const char* to_string(ConfigId id) noexcept;
ConfigId parse_config_id(const std::string& s);  // "c1".."c4", else InvalidParameter

double true_regression(ConfigId id, double x);
double latent_variance(ConfigId id);
double response_sd(ConfigId id);
// Points where pointwise absolute errors are reported.
std::vector<double> pae_points(ConfigId id);

struct SimConfig {
  ConfigId config_id = ConfigId::C2;
  std::size_t n = 500;
  double lambda = 0.85;
  ErrorFamily error_family_true = ErrorFamily::Gaussian;
  ErrorFamily error_family_assumed = ErrorFamily::Gaussian;
  int n_replicates_mc = 50;
  std::uint64_t seed = 1;
  int p = 1;
  double x_lo = -1.5;
  double x_hi = 1.5;
  std::size_t grid_points = 121;
  // Two replicate measurements per subject, each with error variance 2 sigma_u^2.
  bool with_replicates = false;
  // Estimate sigma_u from the replicates instead of using the true value.
  bool estimate_sigma = false;

  // Reference defaults for the configuration (error family, range, grid).
  static SimConfig defaults(ConfigId id);
  double sigma_u() const;
  std::vector<double> x_grid() const;
  void validate() const;
  nlohmann::json to_json() const;
};

struct SimDataset {
  Sample sample;
  std::vector<double> x_latent;
  ConfigId config_id = ConfigId::C2;
  double sigma_u = 0.0;
  double truth(double x) const { return true_regression(config_id, x); }
};

SimDataset simulate_dataset(const SimConfig& config, Rng& rng);

// Error model with the given family and SD (Empirical is not constructible here).
ErrorModel make_error_model(ErrorFamily family, double sigma_u);

// sum_k (m-hat(x_k) - m(x_k))^2 Delta.
double ise(const CurveEstimate& estimate, const std::function<double(double)>& truth);

struct RatioMetrics {
  std::vector<double> pmaer, psdaer, pmser;  // NaN where the DFC denominator is zero
};
// errors[r][k] = m-hat(x_k) - m(x_k) for replicate r.
RatioMetrics ratio_metrics(const std::vector<std::vector<double>>& hz_errors,
                           const std::vector<std::vector<double>>& dfc_errors);

// E[m(X) | W = w] for m = sum beta_k x^k, X ~ N(0,1), reliability lambda.
double naive_regression_oracle(std::span<const double> betas, double lambda, double w);

// Roots of 2(l-1) b2 x^2 + (l-1) b1 x + (2l^2 - 2l + 1) b2 = 0, ascending.
std::pair<double, double> quadratic_bias_roots(double beta1, double beta2, double lambda);

enum class BandwidthMode { Oracle, CVSimex };
const char* to_string(BandwidthMode m) noexcept;

struct Failure {
  int replicate;
  std::string method;
  std::string message;
};

struct BenchReport {
  std::string label;
  nlohmann::json config;
  std::vector<std::string> methods;
  std::vector<double> x_grid;
  std::map<std::string, std::vector<double>> per_replicate_ise;  // NaN for failed fits
  std::map<std::string, std::vector<double>> bandwidths_used;
  // method -> (x0, per-replicate |m-hat(x0) - m(x0)|)
  std::map<std::string, std::vector<std::pair<double, std::vector<double>>>> pae;
  RatioMetrics ratios;
  std::vector<Failure> failures;
  double runtime_sec = 0.0;  // reported on stdout only; files stay byte-identical

  double median_ise(const std::string& method) const;
  nlohmann::json to_json() const;
  std::string to_tidy_csv() const;
};

struct BenchOptions {
  std::size_t oracle_candidates = 40;
  double oracle_low = 0.05;  // times SD(W) n^-1/5
  double oracle_high = 2.0;
  CvSimexOptions cv;
  HzOptions hz;
  QuadratureConfig quadrature;
};

// Log-spaced oracle grid over [low, high] SD(w) n^-1/5.
std::vector<double> oracle_bandwidths(std::span<const double> w, const BenchOptions& opts);

BenchReport run_benchmark(const SimConfig& config, BandwidthMode mode, const BenchOptions& opts = {});

struct MotorcycleOptions {
  int p = 1;
  std::size_t grid_points = 101;
  BandwidthMode mode = BandwidthMode::Oracle;
  BenchOptions bench;
};

// One report per lambda. The reference curve is the error-free local linear
// fit with a cross-validated bandwidth.
std::vector<BenchReport> motorcycle_experiment(const Sample& data, std::span<const double> lambdas, int mc,
                                               std::uint64_t seed, const MotorcycleOptions& opts = {});

}  // namespace errinvar
