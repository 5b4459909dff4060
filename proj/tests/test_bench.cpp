#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "errinvar/bench.hpp"
#include "errinvar/cli.hpp"
#include "test_util.hpp"

using namespace errinvar;

namespace {

struct Moments {
  double mean = 0.0, var = 0.0, m4 = 0.0;
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  for (double v : x) m.mean += v;
  m.mean /= x.size();
  for (double v : x) {
    const double d = v - m.mean;
    m.var += d * d;
    m.m4 += d * d * d * d;
  }
  m.var /= x.size() - 1;
  m.m4 /= x.size();
  return m;
}

CurveEstimate curve(std::vector<double> x, std::vector<double> v) {
  CurveEstimate c;
  c.x_grid = std::move(x);
  c.values = std::move(v);
  c.clamped.assign(c.values.size(), false);
  return c;
}

}  // namespace

TEST_CASE("configuration constants") {
  auto c2 = SimConfig::defaults(ConfigId::C2);
  c2.lambda = 0.5;
  CHECK(c2.sigma_u() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(true_regression(ConfigId::C2, 2.0) == doctest::Approx(1.5));
  CHECK(true_regression(ConfigId::C1, 0.0) == 0.0);
  CHECK(true_regression(ConfigId::C3, 1.0) == doctest::Approx(1.0 / 30 - 5.0 / 6 + 4.5 + 1));
  CHECK(true_regression(ConfigId::C4, 0.0) == doctest::Approx(1.0));
  for (auto id : {ConfigId::C1, ConfigId::C2, ConfigId::C3, ConfigId::C4}) {
    const auto cfg = SimConfig::defaults(id);
    const auto grid = cfg.x_grid();
    for (double x0 : pae_points(id)) CHECK(x0 >= cfg.x_lo);
    for (double x0 : pae_points(id)) CHECK(x0 <= cfg.x_hi);
    CHECK(grid.front() == cfg.x_lo);
    CHECK(grid.back() == cfg.x_hi);
    CHECK(parse_config_id(to_string(id)) == id);
  }
  CHECK_CODE(parse_config_id("c5"), InvalidParameter);
}

TEST_CASE("generators match their analytic moments") {
  for (auto id : {ConfigId::C1, ConfigId::C2, ConfigId::C3, ConfigId::C4}) {
    auto cfg = SimConfig::defaults(id);
    cfg.n = 100000;
    Rng rng = make_stream(11, static_cast<std::uint64_t>(id));
    const auto d = simulate_dataset(cfg, rng);
    const auto m = moments(d.x_latent);
    const double n = static_cast<double>(cfg.n);
    const double var = latent_variance(id);
    CHECK(std::abs(m.mean) <= 5.0 * std::sqrt(var / n));
    CHECK(std::abs(m.var - var) <= 5.0 * std::sqrt((m.m4 - var * var) / n));
    if (id == ConfigId::C3) CHECK(std::abs(m.var - 4.0 / 3.0) <= 0.05 * 4.0 / 3.0);
    const auto mu = moments(d.sample.w);
    CHECK(std::abs(mu.var - var / cfg.lambda) <= 0.05 * var / cfg.lambda);
  }
}

TEST_CASE("datasets are reproducible") {
  auto cfg = SimConfig::defaults(ConfigId::C1);
  cfg.n = 300;
  cfg.with_replicates = true;
  Rng a = make_stream(5, 2), b = make_stream(5, 2);
  const auto d1 = simulate_dataset(cfg, a);
  const auto d2 = simulate_dataset(cfg, b);
  CHECK(d1.sample.w == d2.sample.w);
  CHECK(d1.sample.y == d2.sample.y);
  CHECK(*d1.sample.replicates == *d2.sample.replicates);
  for (std::size_t j = 0; j < cfg.n; ++j)
    CHECK(d1.sample.w[j] == doctest::Approx(0.5 * ((*d1.sample.replicates)[j][0] + (*d1.sample.replicates)[j][1])));
}

TEST_CASE("integrated squared error") {
  const auto x = linspace(-1.0, 2.0, 31);
  auto truth = [](double t) { return std::sin(t); };
  std::vector<double> same, off;
  for (double t : x) {
    same.push_back(std::sin(t));
    off.push_back(std::sin(t) + 0.3);
  }
  CHECK(ise(curve(x, same), truth) == 0.0);
  // a constant offset sums over all 31 nodes: c^2 (b - a + Delta)
  CHECK(ise(curve(x, off), truth) == doctest::Approx(0.09 * 3.1).epsilon(1e-12));

  Rng rng(8);
  for (int rep = 0; rep < 3; ++rep) {
    const auto g = linspace(-2.0, 2.0, 17 + rep);
    std::vector<double> v;
    for (double t : g) v.push_back(t * t + 0.1 * standard_normal(rng));
    long double acc = 0.0L;
    for (std::size_t k = 0; k < g.size(); ++k) acc += std::pow(static_cast<long double>(v[k]) - g[k] * g[k], 2);
    acc *= 4.0L / (g.size() - 1);
    CHECK(std::abs(ise(curve(g, v), [](double t) { return t * t; }) - static_cast<double>(acc)) <= 1e-12);
  }
  CHECK_CODE(ise(curve({1.0}, {1.0}), truth), InvalidParameter);
}

TEST_CASE("ratio metrics") {
  Rng rng(9);
  std::vector<std::vector<double>> a(10, std::vector<double>(7)), b = a;
  for (auto& row : a)
    for (auto& v : row) v = standard_normal(rng);
  for (auto& row : b)
    for (auto& v : row) v = standard_normal(rng);

  const auto same = ratio_metrics(a, a);
  for (std::size_t k = 0; k < 7; ++k) {
    CHECK(same.pmaer[k] == 1.0);
    CHECK(same.psdaer[k] == 1.0);
    CHECK(same.pmser[k] == 1.0);
  }
  auto twice = a;
  for (auto& row : twice)
    for (auto& v : row) v *= 2.0;
  const auto r2 = ratio_metrics(twice, a);
  for (std::size_t k = 0; k < 7; ++k) {
    CHECK(r2.pmaer[k] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r2.psdaer[k] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r2.pmser[k] == doctest::Approx(4.0).epsilon(1e-14));
  }

  const auto r = ratio_metrics(a, b);
  for (std::size_t k = 0; k < 7; ++k) {
    long double ma = 0, mb = 0, qa = 0, qb = 0;
    for (int i = 0; i < 10; ++i) {
      ma += std::abs(a[i][k]);
      mb += std::abs(b[i][k]);
      qa += a[i][k] * a[i][k];
      qb += b[i][k] * b[i][k];
    }
    ma /= 10;
    mb /= 10;
    long double va = 0, vb = 0;
    for (int i = 0; i < 10; ++i) {
      va += std::pow(std::abs(a[i][k]) - ma, 2);
      vb += std::pow(std::abs(b[i][k]) - mb, 2);
    }
    CHECK(std::abs(r.pmaer[k] - static_cast<double>(ma / mb)) <= 1e-12);
    CHECK(std::abs(r.psdaer[k] - static_cast<double>(std::sqrt(va / vb))) <= 1e-12);
    CHECK(std::abs(r.pmser[k] - static_cast<double>(qa / qb)) <= 1e-12);
  }

  std::vector<std::vector<double>> zero(3, std::vector<double>(2, 0.0)), one(3, std::vector<double>(2, 1.0));
  const auto nz = ratio_metrics(one, zero);
  CHECK(std::isnan(nz.pmaer[0]));
  CHECK(std::isnan(nz.pmser[1]));
  CHECK_CODE(ratio_metrics(one, std::vector<std::vector<double>>(2, std::vector<double>(2))), InvalidParameter);
}

TEST_CASE("naive regression oracle") {
  const std::vector<double> quad{0.0, 0.0, 1.0}, lin{0.0, 1.0}, cubic{0.3, -1.0, 0.5, 2.0};
  CHECK(naive_regression_oracle(quad, 0.5, 2.0) == doctest::Approx(1.5).epsilon(1e-14));
  for (double w : {-1.3, 0.0, 0.4, 2.2}) {
    CHECK(naive_regression_oracle(cubic, 1.0, w) == doctest::Approx(0.3 - w + 0.5 * w * w + 2 * w * w * w));
    for (double l : {0.3, 0.7}) CHECK(naive_regression_oracle(lin, l, w) == doctest::Approx(l * w));
    // E[X^3 | W] = mu^3 + 3 mu s2
    const double l = 0.6, mu = l * w, s2 = 1 - l;
    CHECK(naive_regression_oracle(cubic, l, w) ==
          doctest::Approx(0.3 - mu + 0.5 * (mu * mu + s2) + 2 * (mu * mu * mu + 3 * mu * s2)));
  }
}

TEST_CASE("naive local linear fit is consistent for the contaminated regression") {
  const std::vector<double> betas{0.1, 1.0, -0.5};
  const double lambda = 0.8;
  const std::size_t n = 100000;
  Rng rng(21);
  const auto err = gaussian_error(std::sqrt(1.0 / lambda - 1.0));
  Sample s;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = standard_normal(rng);
    s.w.push_back(x + err.sample(rng));
    s.y.push_back(betas[0] + betas[1] * x + betas[2] * x * x + 0.2 * standard_normal(rng));
  }
  const std::vector<double> pts{-1.0, -0.5, 0.0, 0.5, 1.0};
  // the kernel has mu_2 = 16, so the smoothing bias is about 8 h^2 m*''
  const auto fit = local_poly_fit(s, sinc_family_kernel(), 0.05, 1, pts);
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(std::abs(fit.values[i] - naive_regression_oracle(betas, lambda, pts[i])) <= 0.05);
}

TEST_CASE("quadratic bias roots") {
  const auto [a, b] = quadratic_bias_roots(0.0, 1.0, 0.5);
  CHECK(a == doctest::Approx(-std::sqrt(0.5)));
  CHECK(b == doctest::Approx(std::sqrt(0.5)));
  int checked = 0;
  for (double b1 : {-2.0, -0.3, 0.0, 1.5})
    for (double b2 : {-1.0, 0.25, 3.0})
      for (double l : {0.1, 0.5, 0.9}) {
        if (checked == 20) break;
        ++checked;
        const double A = 2 * (l - 1) * b2, B = (l - 1) * b1, C = (2 * l * l - 2 * l + 1) * b2;
        CHECK(B * B - 4 * A * C > 0.0);
        const auto [r1, r2] = quadratic_bias_roots(b1, b2, l);
        CHECK(r1 <= r2);
        CHECK(0.5 * (r1 + r2) == doctest::Approx(-b1 / (4 * b2)).epsilon(1e-12));
        CHECK(A * r1 * r1 + B * r1 + C == doctest::Approx(0.0).scale(std::abs(C) + std::abs(B) + 1));
      }
  CHECK(checked == 20);
  CHECK_CODE(quadratic_bias_roots(1.0, 0.0, 0.5), DegenerateQuadratic);
}

TEST_CASE("benchmark runs are deterministic") {
  auto cfg = SimConfig::defaults(ConfigId::C2);
  cfg.n = 200;
  cfg.n_replicates_mc = 1;
  cfg.seed = 42;
  const auto a = run_benchmark(cfg, BandwidthMode::Oracle);
  const auto b = run_benchmark(cfg, BandwidthMode::Oracle);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.to_tidy_csv() == b.to_tidy_csv());
  CHECK(a.per_replicate_ise.at("hz").size() == 1);
  CHECK(a.bandwidths_used.at("dfc").size() == 1);
}

TEST_CASE("C1 smoke run has no failures") {
  auto cfg = SimConfig::defaults(ConfigId::C1);
  cfg.n = 200;
  cfg.n_replicates_mc = 10;
  cfg.seed = 3;
  const auto rep = run_benchmark(cfg, BandwidthMode::Oracle);
  CHECK(rep.failures.empty());
  for (const auto& m : rep.methods) {
    REQUIRE(rep.per_replicate_ise.at(m).size() == 10);
    for (double v : rep.per_replicate_ise.at(m)) CHECK(std::isfinite(v));
  }
  CHECK(rep.ratios.pmaer.size() == cfg.grid_points);
}

TEST_CASE("motorcycle experiment") {
  const auto data = read_xy_csv(ERRINVAR_DATA_DIR "/mcycle.csv");
  CHECK(data.size() == 133);
  const std::vector<double> lambdas{0.9};
  const auto a = motorcycle_experiment(data, lambdas, 2, 5);
  const auto b = motorcycle_experiment(data, lambdas, 2, 5);
  REQUIRE(a.size() == 1);
  CHECK(a[0].to_json().dump() == b[0].to_json().dump());
  CHECK(a[0].failures.empty());

  Sample tiny;
  tiny.w = {1, 2, 3};
  tiny.y = {1, 2, 3};
  CHECK_CODE(motorcycle_experiment(tiny, lambdas, 1, 1), DataFormatError);
}
