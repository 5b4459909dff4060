#include "errinvar/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "errinvar/error.hpp"
#include "errinvar/errormodel.hpp"
#include "errinvar/parallel.hpp"

namespace errinvar {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double variance(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / (n - 1.0);
}

double median(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); }), v.end());
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string fmt17(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

const char* to_string(ConfigId id) noexcept {
  switch (id) {
    case ConfigId::C1: return "c1";
    case ConfigId::C2: return "c2";
    case ConfigId::C3: return "c3";
    case ConfigId::C4: return "c4";
  }
  return "unknown";
}

ConfigId parse_config_id(const std::string& s) {
  if (s == "c1" || s == "C1") return ConfigId::C1;
  if (s == "c2" || s == "C2") return ConfigId::C2;
  if (s == "c3" || s == "C3") return ConfigId::C3;
  if (s == "c4" || s == "C4") return ConfigId::C4;
  throw Error(ErrorCode::InvalidParameter, "unknown configuration '" + s + "' (expected c1..c4)");
}

double true_regression(ConfigId id, double x) {
  switch (id) {
    case ConfigId::C1: return 2.0 * x * std::exp(-10.0 * std::pow(x, 4) / 81.0);
    case ConfigId::C2: return (x + x * x) / 4.0;
    case ConfigId::C3: return std::pow(x, 6) / 30.0 - 5.0 * std::pow(x, 4) / 6.0 + 4.5 * x * x + x;
    case ConfigId::C4: return std::cos(x * x) + std::sin(x);
  }
  return kNaN;
}

double latent_variance(ConfigId id) {
  switch (id) {
    // 0.8^2 Var(X1) + 0.2^2 Var(X2), Var(X1) = 2.4, Var(X2) = 1/3
    case ConfigId::C1: return 0.64 * 2.4 + 0.04 / 3.0;
    case ConfigId::C2: return 1.0;
    case ConfigId::C3:
    case ConfigId::C4: return 4.0 / 3.0;
  }
  return kNaN;
}

double response_sd(ConfigId id) { return id == ConfigId::C2 ? 0.5 : 0.2; }

std::vector<double> pae_points(ConfigId id) {
  if (id == ConfigId::C2) return {-1.0, 0.0};
  return {1.0, 2.0};
}

SimConfig SimConfig::defaults(ConfigId id) {
  SimConfig c;
  c.config_id = id;
  if (id == ConfigId::C2) {
    c.error_family_true = c.error_family_assumed = ErrorFamily::Gaussian;
    c.x_lo = -1.5;
    c.x_hi = 1.5;
    c.grid_points = 121;
  } else {
    c.error_family_true = c.error_family_assumed = ErrorFamily::Laplace;
    c.x_lo = -2.0;
    c.x_hi = 2.0;
    c.grid_points = 101;
  }
  return c;
}

double SimConfig::sigma_u() const {
  return std::sqrt(sigma2_for_reliability(latent_variance(config_id), lambda));
}

std::vector<double> SimConfig::x_grid() const { return linspace(x_lo, x_hi, grid_points); }

void SimConfig::validate() const {
  if (n < 10) throw Error(ErrorCode::InvalidParameter, "n must be >= 10");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw Error(ErrorCode::InvalidParameter, "lambda must lie in (0, 1]");
  if (n_replicates_mc < 1) throw Error(ErrorCode::InvalidParameter, "need at least one Monte-Carlo replicate");
  if (p < 0 || p > 3) throw Error(ErrorCode::InvalidParameter, "p must lie in [0, 3]");
  if (!(x_hi > x_lo) || grid_points < 2) throw Error(ErrorCode::InvalidParameter, "bad evaluation grid");
  if (error_family_true == ErrorFamily::Empirical || error_family_assumed == ErrorFamily::Empirical)
    throw Error(ErrorCode::InvalidParameter, "simulation error families must be parametric");
  if (estimate_sigma && !with_replicates)
    throw Error(ErrorCode::InvalidParameter, "estimating sigma_u requires replicates");
}

nlohmann::json SimConfig::to_json() const {
  return {{"config_id", to_string(config_id)},
          {"n", n},
          {"lambda", lambda},
          {"sigma_u", sigma_u()},
          {"error_family_true", to_string(error_family_true)},
          {"error_family_assumed", to_string(error_family_assumed)},
          {"n_replicates_mc", n_replicates_mc},
          {"seed", seed},
          {"p", p},
          {"x_range", {x_lo, x_hi}},
          {"grid_points", grid_points},
          {"with_replicates", with_replicates},
          {"estimate_sigma", estimate_sigma}};
}

ErrorModel make_error_model(ErrorFamily family, double sigma_u) {
  switch (family) {
    case ErrorFamily::None: return no_error();
    case ErrorFamily::Laplace: return laplace_error(sigma_u);
    case ErrorFamily::Gaussian: return gaussian_error(sigma_u);
    case ErrorFamily::Empirical: break;
  }
  throw Error(ErrorCode::InvalidParameter, "empirical error models come from data");
}

SimDataset simulate_dataset(const SimConfig& config, Rng& rng) {
  config.validate();
  SimDataset d;
  d.config_id = config.config_id;
  d.sigma_u = config.sigma_u();
  const auto err = make_error_model(config.error_family_true, d.sigma_u);
  const auto rep_err = make_error_model(config.error_family_true, std::sqrt(2.0) * d.sigma_u);
  const double sd_y = response_sd(config.config_id);
  const std::size_t n = config.n;
  d.x_latent.resize(n);
  d.sample.y.resize(n);
  d.sample.w.resize(n);
  if (config.with_replicates) d.sample.replicates.emplace(n);
  for (std::size_t j = 0; j < n; ++j) {
    double x = 0.0;
    switch (config.config_id) {
      case ConfigId::C1: {
        // F(x) = (x^3 + 8)/16 on [-2, 2]
        const double x1 = std::cbrt(16.0 * uniform01(rng) - 8.0);
        const double x2 = 2.0 * uniform01(rng) - 1.0;
        x = 0.8 * x1 + 0.2 * x2;
        break;
      }
      case ConfigId::C2: x = standard_normal(rng); break;
      case ConfigId::C3:
      case ConfigId::C4: x = 4.0 * uniform01(rng) - 2.0; break;
    }
    d.x_latent[j] = x;
    d.sample.y[j] = true_regression(config.config_id, x) + sd_y * standard_normal(rng);
    if (config.with_replicates) {
      const double w1 = x + rep_err.sample(rng);
      const double w2 = x + rep_err.sample(rng);
      (*d.sample.replicates)[j] = {w1, w2};
      d.sample.w[j] = 0.5 * (w1 + w2);
    } else {
      d.sample.w[j] = x + err.sample(rng);
    }
  }
  return d;
}

double ise(const CurveEstimate& estimate, const std::function<double(double)>& truth) {
  const auto& x = estimate.x_grid;
  if (x.size() < 2 || estimate.values.size() != x.size())
    throw Error(ErrorCode::InvalidParameter, "ISE needs a grid of at least two points");
  const double delta = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double e = estimate.values[k] - truth(x[k]);
    acc += e * e;
  }
  return acc * delta;
}

RatioMetrics ratio_metrics(const std::vector<std::vector<double>>& hz, const std::vector<std::vector<double>>& dfc) {
  if (hz.size() != dfc.size()) throw Error(ErrorCode::InvalidParameter, "replicate counts differ");
  RatioMetrics out;
  if (hz.empty()) return out;
  const std::size_t K = hz.front().size();
  for (std::size_t r = 0; r < hz.size(); ++r)
    if (hz[r].size() != K || dfc[r].size() != K) throw Error(ErrorCode::InvalidParameter, "error arrays differ in shape");
  const double R = static_cast<double>(hz.size());
  auto ratio = [](double a, double b) { return b != 0.0 && std::isfinite(a) && std::isfinite(b) ? a / b : kNaN; };
  out.pmaer.resize(K);
  out.psdaer.resize(K);
  out.pmser.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    double ma = 0.0, mb = 0.0, sa = 0.0, sb = 0.0;
    for (std::size_t r = 0; r < hz.size(); ++r) {
      ma += std::abs(hz[r][k]);
      mb += std::abs(dfc[r][k]);
      sa += hz[r][k] * hz[r][k];
      sb += dfc[r][k] * dfc[r][k];
    }
    ma /= R;
    mb /= R;
    double va = 0.0, vb = 0.0;
    for (std::size_t r = 0; r < hz.size(); ++r) {
      va += (std::abs(hz[r][k]) - ma) * (std::abs(hz[r][k]) - ma);
      vb += (std::abs(dfc[r][k]) - mb) * (std::abs(dfc[r][k]) - mb);
    }
    const double sda = R > 1 ? std::sqrt(va / (R - 1.0)) : kNaN;
    const double sdb = R > 1 ? std::sqrt(vb / (R - 1.0)) : kNaN;
    out.pmaer[k] = ratio(ma, mb);
    out.psdaer[k] = ratio(sda, sdb);
    out.pmser[k] = ratio(sa / R, sb / R);
  }
  return out;
}

double naive_regression_oracle(std::span<const double> betas, double lambda, double w) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw Error(ErrorCode::InvalidParameter, "lambda must lie in (0, 1]");
  // X | W = w ~ N(lambda w, 1 - lambda)
  const double mu = lambda * w;
  const double s2 = 1.0 - lambda;
  double total = 0.0;
  for (std::size_t k = 0; k < betas.size(); ++k) {
    double moment = 0.0;
    double binom = 1.0;      // C(k, 2l)
    double dfact = 1.0;      // (2l - 1)!!
    double s2pow = 1.0;      // s2^l
    for (std::size_t l = 0; 2 * l <= k; ++l) {
      moment += binom * dfact * s2pow * std::pow(mu, static_cast<double>(k - 2 * l));
      const auto kk = static_cast<double>(k), ll = static_cast<double>(l);
      binom = binom * (kk - 2 * ll) * (kk - 2 * ll - 1) / ((2 * ll + 1) * (2 * ll + 2));
      dfact *= 2 * ll + 1;
      s2pow *= s2;
    }
    total += betas[k] * moment;
  }
  return total;
}

std::pair<double, double> quadratic_bias_roots(double beta1, double beta2, double lambda) {
  if (beta2 == 0.0) throw Error(ErrorCode::DegenerateQuadratic, "beta2 must be non-zero");
  if (!(lambda > 0.0 && lambda < 1.0)) throw Error(ErrorCode::InvalidParameter, "lambda must lie in (0, 1)");
  const double a = 2.0 * (lambda - 1.0) * beta2;
  const double b = (lambda - 1.0) * beta1;
  const double c = (2.0 * lambda * lambda - 2.0 * lambda + 1.0) * beta2;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) throw Error(ErrorCode::DegenerateQuadratic, "no real roots");
  // Stable form avoids cancellation between -b and sqrt(disc).
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b == 0.0 ? 1.0 : b));
  double r1 = q / a, r2 = c / q;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

const char* to_string(BandwidthMode m) noexcept { return m == BandwidthMode::Oracle ? "oracle" : "cv-simex"; }

double BenchReport::median_ise(const std::string& method) const {
  auto it = per_replicate_ise.find(method);
  return it == per_replicate_ise.end() ? kNaN : median(it->second);
}

nlohmann::json BenchReport::to_json() const {
  using nlohmann::json;
  json j;
  j["schema_version"] = "1";
  j["label"] = label;
  j["config"] = config;
  j["methods"] = methods;
  j["x_grid"] = x_grid;
  j["per_replicate_ise"] = per_replicate_ise;
  j["bandwidths_used"] = bandwidths_used;
  json pj = json::object();
  for (const auto& [m, entries] : pae) {
    json arr = json::array();
    for (const auto& [x0, v] : entries) arr.push_back({{"x0", x0}, {"values", v}});
    pj[m] = arr;
  }
  j["pae"] = pj;
  j["ratios"] = {{"pmaer", ratios.pmaer}, {"psdaer", ratios.psdaer}, {"pmser", ratios.pmser}};
  json med = json::object();
  for (const auto& m : methods) med[m] = median_ise(m);
  j["summary"] = {{"median_ise", med}};
  json fj = json::array();
  for (const auto& f : failures) fj.push_back({{"replicate", f.replicate}, {"method", f.method}, {"message", f.message}});
  j["failures"] = fj;
  return j;
}

std::string BenchReport::to_tidy_csv() const {
  std::ostringstream os;
  os << "replicate,method,metric,value\n";
  std::size_t reps = 0;
  for (const auto& [m, v] : per_replicate_ise) reps = std::max(reps, v.size());
  for (std::size_t r = 0; r < reps; ++r)
    for (const auto& m : methods) {
      const auto& is = per_replicate_ise.at(m);
      const auto& bw = bandwidths_used.at(m);
      os << r << ',' << m << ",ise," << fmt17(is[r]) << '\n';
      os << r << ',' << m << ",bandwidth," << fmt17(bw[r]) << '\n';
      if (auto it = pae.find(m); it != pae.end())
        for (const auto& [x0, v] : it->second) os << r << ',' << m << ",pae_" << short_num(x0) << ',' << fmt17(v[r]) << '\n';
    }
  return os.str();
}

std::vector<double> oracle_bandwidths(std::span<const double> w, const BenchOptions& opts) {
  const double sd = std::sqrt(variance(w));
  if (!(sd > 0.0)) throw Error(ErrorCode::DegenerateData, "covariate has zero variance");
  const double base = sd * std::pow(static_cast<double>(w.size()), -0.2);
  const std::size_t m = std::max<std::size_t>(opts.oracle_candidates, 1);
  std::vector<double> hs(m);
  const double lo = std::log(opts.oracle_low * base), hi = std::log(opts.oracle_high * base);
  for (std::size_t i = 0; i < m; ++i)
    hs[i] = m == 1 ? std::exp(lo) : std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m - 1));
  return hs;
}

namespace {

const std::vector<std::string> kMethods = {"hz", "dfc", "naive"};

// One replicate's fitting problem: evaluation points are the ISE grid
// followed by the PAE points; truth is given at all of them.
struct Problem {
  const Sample* data;
  ErrorModel assumed;
  int p;
  std::vector<double> points;
  std::size_t grid_size;
  std::vector<double> truth;
  double delta;
};

struct MethodOutcome {
  bool ok = false;
  std::string message;
  double h = kNaN;
  double ise = kNaN;
  std::vector<double> errors;  // signed, at every point
};

std::vector<double> fit(const std::string& method, const Problem& pb, double h, const BenchOptions& opts) {
  const auto& K = sinc_family_kernel();
  if (method == "hz") return hz_points(*pb.data, K, pb.assumed, h, pb.p, pb.points, opts.hz).values;
  if (method == "dfc") return dfc_points(*pb.data, K, pb.assumed, h, pb.p, pb.points, opts.quadrature).values;
  const LocalPolySmoother sm(*pb.data, K, h, pb.p);
  std::vector<double> v(pb.points.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = sm.evaluate(pb.points[i]).value;
  return v;
}

double grid_ise(const Problem& pb, const std::vector<double>& values) {
  double acc = 0.0;
  for (std::size_t k = 0; k < pb.grid_size; ++k) {
    const double e = values[k] - pb.truth[k];
    acc += e * e;
  }
  return acc * pb.delta;
}

MethodOutcome run_method(const std::string& method, const Problem& pb, BandwidthMode mode, const BenchOptions& opts,
                         Rng& cv_rng) {
  MethodOutcome out;
  try {
    std::vector<double> best_values;
    if (mode == BandwidthMode::Oracle) {
      double best = kInf;
      std::string last_error;
      for (double h : oracle_bandwidths(pb.data->w, opts)) {
        std::vector<double> v;
        try {
          v = fit(method, pb, h, opts);
        } catch (const Error& e) {
          last_error = e.what();
          continue;
        }
        const double s = grid_ise(pb, v);
        if (std::isfinite(s) && s < best) {
          best = s;
          out.h = h;
          best_values = std::move(v);
        }
      }
      if (!std::isfinite(best))
        throw Error(ErrorCode::NoValidBandwidth, "no oracle candidate gave a finite ISE" +
                                                     (last_error.empty() ? "" : " (" + last_error + ")"));
    } else {
      const auto& K = sinc_family_kernel();
      if (method == "naive")
        out.h = errorfree_cv_bandwidth(*pb.data, K, pb.p, oracle_bandwidths(pb.data->w, opts));
      else
        out.h = cv_simex_bandwidth(*pb.data, K, pb.assumed, pb.p, method == "hz" ? EstimatorKind::HZ : EstimatorKind::DFC,
                                   cv_rng, opts.cv)
                    .h_hat;
      best_values = fit(method, pb, out.h, opts);
    }
    out.ise = grid_ise(pb, best_values);
    out.errors.resize(best_values.size());
    for (std::size_t i = 0; i < best_values.size(); ++i) out.errors[i] = best_values[i] - pb.truth[i];
    out.ok = std::isfinite(out.ise);
    if (!out.ok) out.message = "non-finite ISE";
  } catch (const std::exception& e) {
    out.ok = false;
    out.message = e.what();
    out.h = kNaN;
    out.ise = kNaN;
  }
  return out;
}

struct ReplicateOutcome {
  std::vector<MethodOutcome> methods;
};

BenchReport assemble(const std::vector<ReplicateOutcome>& reps, const std::vector<double>& grid,
                     const std::vector<double>& extra) {
  BenchReport rep;
  rep.methods = kMethods;
  rep.x_grid = grid;
  const std::size_t R = reps.size();
  std::vector<std::vector<double>> hz_err, dfc_err;
  for (std::size_t m = 0; m < kMethods.size(); ++m) {
    const auto& name = kMethods[m];
    auto& is = rep.per_replicate_ise[name];
    auto& bw = rep.bandwidths_used[name];
    auto& pe = rep.pae[name];
    for (double x0 : extra) pe.emplace_back(x0, std::vector<double>());
    for (std::size_t r = 0; r < R; ++r) {
      const auto& o = reps[r].methods[m];
      is.push_back(o.ok ? o.ise : kNaN);
      bw.push_back(o.h);
      for (std::size_t e = 0; e < extra.size(); ++e)
        pe[e].second.push_back(o.ok ? std::abs(o.errors[grid.size() + e]) : kNaN);
      if (!o.ok) rep.failures.push_back({static_cast<int>(r), name, o.message});
    }
  }
  for (std::size_t r = 0; r < R; ++r) {
    const auto& h = reps[r].methods[0];
    const auto& d = reps[r].methods[1];
    if (!h.ok || !d.ok) continue;
    hz_err.emplace_back(h.errors.begin(), h.errors.begin() + static_cast<std::ptrdiff_t>(grid.size()));
    dfc_err.emplace_back(d.errors.begin(), d.errors.begin() + static_cast<std::ptrdiff_t>(grid.size()));
  }
  rep.ratios = ratio_metrics(hz_err, dfc_err);
  return rep;
}

// Streams for the CV draws of method m in replicate r, disjoint from the
// simulation streams.
Rng cv_stream(std::uint64_t seed, std::uint64_t r, std::size_t m) {
  return make_stream(seed ^ 0x9e3779b97f4a7c15ull, r * 8 + m);
}

}  // namespace

BenchReport run_benchmark(const SimConfig& config, BandwidthMode mode, const BenchOptions& opts) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = config.x_grid();
  const auto extra = pae_points(config.config_id);
  std::vector<ReplicateOutcome> reps(static_cast<std::size_t>(config.n_replicates_mc));
  parallel_for(reps.size(), [&](std::size_t r) {
    Rng rng = make_stream(config.seed, r);
    const auto ds = simulate_dataset(config, rng);
    double sigma = ds.sigma_u;
    if (config.estimate_sigma) sigma = std::sqrt(estimate_sigma2_from_replicates(ds.sample));
    Problem pb{&ds.sample, make_error_model(config.error_family_assumed, sigma), config.p, grid, grid.size(), {}, 0.0};
    pb.points.insert(pb.points.end(), extra.begin(), extra.end());
    for (double x : pb.points) pb.truth.push_back(ds.truth(x));
    pb.delta = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
    for (std::size_t m = 0; m < kMethods.size(); ++m) {
      Rng cr = cv_stream(config.seed, r, m);
      reps[r].methods.push_back(run_method(kMethods[m], pb, mode, opts, cr));
    }
  });
  auto report = assemble(reps, grid, extra);
  report.label = std::string(to_string(config.config_id)) + " lambda=" + short_num(config.lambda);
  report.config = config.to_json();
  report.config["bandwidth_mode"] = to_string(mode);
  report.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::vector<BenchReport> motorcycle_experiment(const Sample& data, std::span<const double> lambdas, int mc,
                                               std::uint64_t seed, const MotorcycleOptions& opts) {
  try {
    data.validate(10);
  } catch (const Error& e) {
    throw Error(ErrorCode::DataFormatError, std::string("motorcycle data: ") + e.what());
  }
  if (mc < 1) throw Error(ErrorCode::InvalidParameter, "need at least one Monte-Carlo replicate");
  for (double l : lambdas)
    if (!(l > 0.0 && l < 1.0)) throw Error(ErrorCode::InvalidParameter, "lambda must lie in (0, 1)");
  const auto& K = sinc_family_kernel();
  const double var_t = variance(data.w);
  if (!(var_t > 0.0)) throw Error(ErrorCode::DataFormatError, "motorcycle data: times are constant");

  const double h_ideal = errorfree_cv_bandwidth(data, K, 1, oracle_bandwidths(data.w, opts.bench));
  const auto [tmin, tmax] = std::minmax_element(data.w.begin(), data.w.end());
  const auto grid = linspace(*tmin, *tmax, opts.grid_points);
  const auto ideal = local_poly_fit(data, K, h_ideal, 1, grid);

  std::vector<BenchReport> out;
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    const auto t0 = std::chrono::steady_clock::now();
    const double lambda = lambdas[li];
    const double sigma = std::sqrt(sigma2_for_reliability(var_t, lambda));
    const auto lap = laplace_error(sigma);
    std::vector<ReplicateOutcome> reps(static_cast<std::size_t>(mc));
    parallel_for(reps.size(), [&](std::size_t r) {
      Rng rng = make_stream(seed, li * 1000003u + r);
      Sample contaminated;
      contaminated.y = data.y;
      contaminated.w.resize(data.size());
      for (std::size_t j = 0; j < data.size(); ++j) contaminated.w[j] = data.w[j] + lap.sample(rng);
      Problem pb{&contaminated, lap, opts.p, grid, grid.size(), ideal.values, 0.0};
      pb.delta = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
      for (std::size_t m = 0; m < kMethods.size(); ++m) {
        Rng cr = cv_stream(seed, li * 1000003u + r, m);
        reps[r].methods.push_back(run_method(kMethods[m], pb, opts.mode, opts.bench, cr));
      }
    });
    auto report = assemble(reps, grid, {});
    report.label = "motorcycle lambda=" + short_num(lambda);
    report.config = {{"experiment", "motorcycle"}, {"lambda", lambda},       {"sigma_u", sigma},
                     {"mc", mc},                   {"seed", seed},           {"p", opts.p},
                     {"ideal_bandwidth", h_ideal}, {"grid_points", opts.grid_points},
                     {"x_range", {*tmin, *tmax}},  {"bandwidth_mode", to_string(opts.mode)}};
    report.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(report));
  }
  return out;
}

}  // namespace errinvar
