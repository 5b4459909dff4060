// End-to-end acceptance checks. One PASS/FAIL line per criterion; the exit
// status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "errinvar/bandwidth.hpp"
#include "errinvar/bench.hpp"
#include "errinvar/cli.hpp"
#include "errinvar/deconv.hpp"
#include "errinvar/errormodel.hpp"
#include "errinvar/fourier.hpp"
#include "oracles.hpp"

using namespace errinvar;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Sample contaminated(std::size_t n, std::uint64_t seed, const ErrorModel& err) {
  Rng rng(seed);
  Sample s;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = standard_normal(rng);
    s.w.push_back(x + err.sample(rng));
    s.y.push_back(std::sin(1.5 * x) + 0.3 * x * x + 0.2 * standard_normal(rng));
  }
  return s;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b, const std::vector<bool>& skip = {}) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (skip.empty() || !skip[i]) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome fft_accuracy() {
  const auto t0 = Clock::now();
  const auto g = default_grid();
  GridFunction f{g, std::vector<cplx>(g->G), Domain::Time};
  for (std::size_t i = 0; i < g->G; ++i) {
    const double s = g->s_nodes[i];
    f.values[i] = std::exp(-0.5 * s * s) / std::sqrt(2.0 * std::numbers::pi);
  }
  const auto F = cft(f);
  double se = 0.0;
  for (std::size_t k = 0; k < g->G; ++k) se += std::norm(F.values[k] - std::exp(-0.5 * g->t_nodes[k] * g->t_nodes[k]));
  const double rmse = std::sqrt(se / g->G), secs = seconds_since(t0);
  return {rmse <= 1e-12 && secs < 1.0, fmt("RMSE %.3g (<= 1e-12), %.3fs (< 1s)", rmse, secs)};
}

Outcome local_constant_coincidence() {
  const auto t0 = Clock::now();
  const auto& K = sinc_family_kernel();
  double worst = 0.0;
  std::size_t compared = 0;
  for (int c = 0; c < 20; ++c) {
    const auto err = c % 2 ? gaussian_error(0.15 + 0.02 * c) : laplace_error(0.15 + 0.03 * c);
    const auto s = contaminated(100 + 20 * c, 500 + c, err);
    const double h = 0.3 + 0.01 * c;
    const auto xs = linspace(-1.8, 1.8, 37);
    const auto a = hz_estimate(s, K, err, h, 0, xs);
    const auto b = dfc_estimate(s, K, err, h, 0, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (a.clamped[i] || b.clamped[i]) continue;
      worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
      ++compared;
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-6 && secs < 30.0 && compared > 0,
          fmt("sup |hz - dfc| %.3g (<= 1e-6) over %.0f points, %.1fs (< 30s)", worst, double(compared), secs)};
}

Outcome zero_error_degeneration() {
  const auto& K = sinc_family_kernel();
  double worst = 0.0;
  for (int d = 0; d < 10; ++d) {
    const auto s = contaminated(200 + 30 * d, 900 + d, no_error());
    const auto xs = linspace(-1.5, 1.5, 31);
    const int p = 1 + d % 2;
    const double h = 0.3 + 0.02 * d;
    const auto naive = local_poly_fit(s, K, h, p, xs);
    worst = std::max(worst, sup_diff(hz_estimate(s, K, no_error(), h, p, xs).values, naive.values));
    worst = std::max(worst, sup_diff(dfc_estimate(s, K, no_error(), h, p, xs).values, naive.values));
  }
  return {worst <= 1e-3, fmt("sup |corrected - naive| %.3g (<= 1e-3)", worst)};
}

Outcome oracle_equivalence() {
  const auto& K = sinc_family_kernel();
  const auto err = laplace_error(0.5);
  const auto s = contaminated(5, 11, err);
  std::vector<double> w = s.w;
  std::sort(w.begin(), w.end());
  const std::vector<double> xs{w[1], 0.5 * (w[1] + w[2]), w[3]};
  const auto lib = hz_points(s, K, err, 0.6, 1, xs);
  const auto ref = oracle::HzQuadrature{s.w, s.y, 0.5, 0.6, 1}(xs);
  const double d = sup_diff(lib.values, ref);
  return {d <= 1e-4, fmt("max |fft - quadrature| %.3g (<= 1e-4) at 3 points", d)};
}

Outcome naive_consistency() {
  const double lambda = 0.5;
  Rng rng(2718);
  const auto err = gaussian_error(std::sqrt(1.0 / lambda - 1.0));
  Sample s;
  for (int j = 0; j < 100000; ++j) {
    const double x = standard_normal(rng);
    s.w.push_back(x + err.sample(rng));
    s.y.push_back(x * x + 0.2 * standard_normal(rng));
  }
  const std::vector<double> pts{-1.0, 0.0, 1.0, 2.0};
  const auto fit = local_poly_fit(s, sinc_family_kernel(), 0.05, 1, pts);
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    worst = std::max(worst, std::abs(fit.values[i] - (lambda * lambda * pts[i] * pts[i] + 1 - lambda)));
  return {worst <= 0.05, fmt("max |fit - m*| %.3g (<= 0.05)", worst)};
}

Outcome directional_benchmark() {
  auto cfg = SimConfig::defaults(ConfigId::C2);
  cfg.n = 500;
  cfg.lambda = 0.85;
  cfg.n_replicates_mc = 50;
  cfg.seed = 7;
  const auto r = run_benchmark(cfg, BandwidthMode::Oracle);
  const double hz = r.median_ise("hz"), dfc = r.median_ise("dfc");
  return {hz <= dfc && r.runtime_sec <= 600.0,
          fmt("median ISE hz %.5g <= dfc %.5g, %.0f failures", hz, dfc, double(r.failures.size()))};
}

Outcome bandwidth_identity() {
  auto cfg = SimConfig::defaults(ConfigId::C4);
  Rng drng = make_stream(4, 0);
  const auto d = simulate_dataset(cfg, drng);
  const auto err = make_error_model(cfg.error_family_assumed, d.sigma_u);
  bool ok = true;
  std::string detail;
  for (auto m : {EstimatorKind::HZ, EstimatorKind::DFC}) {
    Rng rng = make_stream(4, 1 + static_cast<int>(m));
    const auto r = cv_simex_bandwidth(d.sample, sinc_family_kernel(), err, 1, m, rng);
    const bool identity = r.h_hat == r.h1 * r.h1 / r.h2;
    const bool in1 = !r.pushed1 && r.h1 > r.region1.first && r.h1 < r.region1.second;
    const bool in2 = !r.pushed2 && r.h2 > r.region2.first && r.h2 < r.region2.second;
    ok = ok && identity && in1 && in2 && r.B == 10 && r.L == 10;
    detail += std::string(m == EstimatorKind::HZ ? "hz" : "dfc") + (identity ? " identity ok" : " identity broken") +
              fmt(", h1 %.4g in (%.4g, %.4g)", r.h1, r.region1.first, r.region1.second) +
              fmt(", h2 %.4g in (%.4g, %.4g); ", r.h2, r.region2.first, r.region2.second);
  }
  return {ok, detail};
}

Outcome replicate_error_model() {
  const double sigma = 0.5;
  const std::size_t n = 10000;
  Rng rng(8088);
  const auto rep_err = laplace_error(std::sqrt(2.0) * sigma);
  std::vector<double> y(n), w1(n), w2(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = standard_normal(rng);
    w1[j] = x + rep_err.sample(rng);
    w2[j] = x + rep_err.sample(rng);
  }
  const auto s = Sample::from_replicates(y, w1, w2);
  const double s2 = estimate_sigma2_from_replicates(s);
  const double rel = std::abs(s2 - sigma * sigma) / (sigma * sigma);
  const auto e = estimate_charfn_dhm(s, *default_grid());
  // The averaged error (U1 + U2) / 2 has charfn (1 + sigma^2 t^2 / 4)^-2; a
  // single Laplace law with variance sigma^2 is also reported for reference.
  double sup_avg = 0.0, sup_laplace = 0.0;
  for (double t = -5.0; t <= 5.0; t += 0.005) {
    const double q = 1.0 + 0.25 * sigma * sigma * t * t;
    sup_avg = std::max(sup_avg, std::abs(e.charfn(t) - 1.0 / (q * q)));
    sup_laplace = std::max(sup_laplace, std::abs(e.charfn(t) - 1.0 / (1.0 + 0.5 * sigma * sigma * t * t)));
  }
  return {rel <= 0.05 && sup_avg <= 0.05,
          fmt("sigma2 rel err %.3g (<= 0.05); DHM sup err %.3g (<= 0.05) vs averaged-error charfn, %.3g vs "
              "single Laplace(sigma_u)",
              rel, sup_avg, sup_laplace)};
}

Outcome motorcycle_degeneration() {
  const auto data = read_xy_csv(ERRINVAR_DATA_DIR "/mcycle.csv");
  const std::vector<double> lambdas{0.9999};
  const auto r = motorcycle_experiment(data, lambdas, 5, 31).front();
  const auto& naive = r.per_replicate_ise.at("naive");
  double worst = 0.0;
  bool ok = r.failures.empty();
  for (const std::string m : {"hz", "dfc"})
    for (std::size_t i = 0; i < naive.size(); ++i) {
      const double ratio = r.per_replicate_ise.at(m)[i] / naive[i];
      ok = ok && std::isfinite(ratio) && ratio <= 1.05;
      worst = std::max(worst, ratio);
    }
  return {ok, fmt("max ISE / naive ISE %.4g (<= 1.05) over 5 replicates, naive median %.3g", worst,
                  r.median_ise("naive"))};
}

Outcome determinism() {
  const fs::path base = fs::temp_directory_path() / "errinvar_acceptance";
  fs::remove_all(base);
  const std::string input = ERRINVAR_TEST_DIR "/golden/estimate_input.csv";
  auto commands = [&](const fs::path& dir) {
    fs::create_directories(dir);
    const std::string d = dir.string();
    std::vector<std::vector<std::string>> cmds{
        {"estimate", "--data", input, "--method", "hz", "--error", "laplace:0.3", "--bandwidth", "cv-simex", "--seed", "5",
         "--out", d + "/est_hz.csv"},
        {"estimate", "--data", input, "--method", "dfc", "--error", "laplace:0.3", "--bandwidth", "0.4", "--out",
         d + "/est_dfc.csv"},
        {"bandwidth", "--data", input, "--method", "dfc", "--error", "laplace:0.3", "--seed", "5", "--out",
         d + "/bw.csv"},
        {"simulate", "--config", "c3", "--lambda", "0.8,0.9", "--n", "200", "--mc", "2", "--seed", "5", "--out-dir", d},
        {"motorcycle", "--data", ERRINVAR_DATA_DIR "/mcycle.csv", "--lambda", "0.9", "--mc", "1", "--seed", "5",
         "--out-dir", d}};
    for (const auto& c : cmds) {
      std::ostringstream o, e;
      if (run_cli(c, o, e) != 0) throw std::runtime_error(c.front() + " failed: " + e.str());
    }
  };
  commands(base / "a");
  commands(base / "b");
  std::size_t files = 0, differing = 0;
  for (const auto& f : fs::directory_iterator(base / "a")) {
    ++files;
    if (!fs::exists(base / "b" / f.path().filename()) || slurp(f.path()) != slurp(base / "b" / f.path().filename()))
      ++differing;
  }
  fs::remove_all(base);
  return {files >= 10 && differing == 0, fmt("%.0f output files, %.0f differ", double(files), double(differing))};
}

}  // namespace

int main() {
  criterion(1, "FFT/CFT accuracy", fft_accuracy);
  criterion(2, "local constant coincidence", local_constant_coincidence);
  criterion(3, "zero-error degeneration", zero_error_degeneration);
  criterion(4, "oracle equivalence", oracle_equivalence);
  criterion(5, "naive-fit consistency", naive_consistency);
  criterion(6, "directional benchmark C2", directional_benchmark);
  criterion(7, "bandwidth identity", bandwidth_identity);
  criterion(8, "replicate error model", replicate_error_model);
  criterion(9, "motorcycle degeneration", motorcycle_degeneration);
  criterion(10, "determinism", determinism);
  return failures;
}
