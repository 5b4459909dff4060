#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "errinvar/localpoly.hpp"
#include "errinvar/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace errinvar;

namespace {

Sample uniform_sample(std::size_t n, std::uint64_t seed, double (*m)(double), double noise) {
  Rng rng(seed);
  Sample s;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = -2.0 + 4.0 * uniform01(rng);
    s.w.push_back(x);
    s.y.push_back(m(x) + noise * standard_normal(rng));
  }
  return s;
}

double quad(double x) { return 1.0 - x + 0.8 * x * x; }

}  // namespace

TEST_CASE("constant responses are reproduced") {
  const auto& K = sinc_family_kernel();
  auto s = uniform_sample(80, 1, [](double) { return 0.0; }, 0.0);
  for (auto& y : s.y) y = 3.25;
  const auto grid = linspace(-1.8, 1.8, 19);
  for (int p : {0, 1, 2, 3})
    for (double h : {0.15, 0.4, 1.5}) {
      const auto e = local_poly_fit(s, K, h, p, grid);
      for (double v : e.values) CHECK(std::abs(v - 3.25) <= 1e-10);
    }
}

TEST_CASE("lines are reproduced by the local linear fit") {
  const auto& K = sinc_family_kernel();
  const auto s = uniform_sample(120, 2, [](double x) { return 2.0 * x + 1.0; }, 0.0);
  const auto grid = linspace(-1.0, 1.0, 11);
  const auto e = local_poly_fit(s, K, 0.3, 1, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(e.values[i] - (2.0 * grid[i] + 1.0)) <= 1e-8);
  CHECK(e.method == Method::Naive);
  CHECK(e.order == 1);
  CHECK(e.bandwidth == 0.3);
  CHECK(e.clamped_count() == 0);
}

TEST_CASE("polynomials of degree up to p are reproduced at interior points") {
  const auto& K = sinc_family_kernel();
  for (int p = 0; p <= 3; ++p) {
    Rng rng(10 + p);
    Sample s;
    for (int j = 0; j < 400; ++j) {
      const double x = -3.0 + 6.0 * uniform01(rng);
      double y = 0.0;
      for (int k = p; k >= 0; --k) y = y * x + (0.5 + k);
      s.w.push_back(x);
      s.y.push_back(y);
    }
    const double h = 0.2;
    const auto grid = linspace(-3.0 + 3 * h, 3.0 - 3 * h, 13);
    const auto e = local_poly_fit(s, K, h, p, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double y = 0.0;
      for (int k = p; k >= 0; --k) y = y * grid[i] + (0.5 + k);
      CHECK(std::abs(e.values[i] - y) <= 1e-6);
    }
  }
}

TEST_CASE("local fit equals a brute-force weighted least squares solve") {
  const auto& K = sinc_family_kernel();
  const auto s = uniform_sample(60, 3, quad, 0.3);
  for (int p : {0, 1, 2})
    for (double x : {-1.1, 0.3, 1.7}) {
      const std::vector<double> g{x};
      const double fit = local_poly_fit(s, K, 0.35, p, g).values[0];
      CHECK(std::abs(fit - oracle::wls(s.w, s.y, 0.35, p, x)) <= 1e-10);
    }
}

TEST_CASE("argument errors") {
  const auto& K = sinc_family_kernel();
  const auto s = uniform_sample(5, 4, quad, 0.1);
  const std::vector<double> g{0.0};
  const std::vector<double> s0{0.14, 0.0, 0.0}, t0{0.4, 0.0};
  CHECK(solve_local_system(s0, t0, 1).clamped);
  CHECK_CODE(local_poly_fit(s, K, 0.0, 1, g), InvalidBandwidth);
  CHECK_CODE(local_poly_fit(s, K, -1.0, 1, g), InvalidBandwidth);
  CHECK_CODE(local_poly_fit(s, K, 0.5, 5, g), InsufficientData);
  CHECK_CODE(kde(s, K, 0.0, g), InvalidBandwidth);
  const std::vector<double> bad{0.0, 0.0};
  CHECK_CODE(local_poly_fit(s, K, 0.5, 1, bad), InvalidParameter);
}

TEST_CASE("kde: normalisation, single point, direct sum") {
  const auto& K = sinc_family_kernel();
  const auto s = uniform_sample(100, 5, quad, 0.0);
  const double h = 0.25;
  const auto [lo, hi] = std::minmax_element(s.w.begin(), s.w.end());
  const auto grid = linspace(*lo - 10 * h, *hi + 10 * h, 4001);
  const auto f = kde(s, K, h, grid);
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) mass += 0.5 * (f[i] + f[i + 1]) * (grid[i + 1] - grid[i]);
  CHECK(std::abs(mass - 1.0) <= 1e-3);

  for (double x : {-1.3, -0.2, 0.0, 0.9, 1.95}) {
    double direct = 0.0;
    for (double w : s.w) direct += oracle::kernel((w - x) / h);
    direct /= 100 * h;
    const std::vector<double> g{x};
    CHECK(std::abs(kde(s, K, h, g)[0] - direct) <= 1e-12);
  }

  Sample one;
  one.w = {0.0};
  one.y = {1.0};
  const std::vector<double> xs{-0.4, 0.0, 0.35};
  const auto f1 = kde(one, K, 0.5, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(f1[i] == doctest::Approx(K.time_domain(-xs[i] / 0.5) / 0.5).epsilon(1e-14));
}

TEST_CASE("permuting the sample leaves outputs bit-identical") {
  const auto& K = sinc_family_kernel();
  auto s = uniform_sample(90, 6, quad, 0.4);
  const auto grid = linspace(-2.5, 2.5, 31);
  const auto a = local_poly_fit(s, K, 0.3, 1, grid);
  const auto fa = kde(s, K, 0.3, grid);
  std::vector<std::size_t> perm(s.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(8));
  Sample t;
  for (auto i : perm) {
    t.w.push_back(s.w[i]);
    t.y.push_back(s.y[i]);
  }
  CHECK(local_poly_fit(t, K, 0.3, 1, grid).values == a.values);
  CHECK(kde(t, K, 0.3, grid) == fa);
}

TEST_CASE("far from the data the fit is finite and flagged") {
  const auto& K = sinc_family_kernel();
  const auto s = uniform_sample(30, 7, quad, 0.1);
  const std::vector<double> g{0.0, 400.0};
  const auto e = local_poly_fit(s, K, 0.2, 2, g);
  CHECK_FALSE(e.clamped[0]);
  CHECK(e.clamped[1]);
  for (double v : e.values) CHECK(std::isfinite(v));
}

TEST_CASE("leave-one-out CV bandwidth") {
  const auto& K = sinc_family_kernel();
  const auto s = uniform_sample(60, 11, quad, 0.3);
  const std::vector<double> single{0.37};
  CHECK(errorfree_cv_bandwidth(s, K, 1, single) == 0.37);

  std::vector<double> cands;
  for (int i = 1; i <= 20; ++i) cands.push_back(0.1 * i);
  std::vector<double> dup = cands;
  dup.insert(dup.end(), cands.rbegin(), cands.rend());
  const double best = errorfree_cv_bandwidth(s, K, 1, cands);
  CHECK(errorfree_cv_bandwidth(s, K, 1, dup) == best);

  // Brute-force CV curve: refit without each observation.
  std::vector<double> cv;
  for (double h : cands) {
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::vector<double> w, y;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (j != i) {
          w.push_back(s.w[j]);
          y.push_back(s.y[j]);
        }
      const double r = s.y[i] - oracle::wls(w, y, h, 1, s.w[i]);
      sum += r * r;
    }
    cv.push_back(sum / static_cast<double>(s.size()));
  }
  const auto lib = errorfree_cv_curve(s, K, 1, cands);
  for (std::size_t c = 0; c < cands.size(); ++c) CHECK(lib[c] == doctest::Approx(cv[c]).epsilon(1e-9));
  CHECK(best == cands[static_cast<std::size_t>(std::min_element(cv.begin(), cv.end()) - cv.begin())]);
}

TEST_CASE("CV with nothing usable") {
  const auto& K = sinc_family_kernel();
  Sample s;
  s.w = {0.0, 0.0, 0.0, 0.0};
  s.y = {1.0, 2.0, 3.0, 4.0};
  const std::vector<double> c{0.5, 1.0};
  // All W equal: no local slope can be fitted.
  CHECK_CODE(errorfree_cv_bandwidth(s, K, 1, c), NoValidBandwidth);
  const std::vector<double> none;
  CHECK_CODE(errorfree_cv_bandwidth(s, K, 1, none), InvalidParameter);
}

TEST_CASE("sample validation") {
  Sample s;
  s.w = {1.0, 2.0};
  s.y = {1.0};
  CHECK_CODE(s.validate(), DataFormatError);
  s.y = {1.0, NAN};
  CHECK_CODE(s.validate(), DataFormatError);
  s.y = {1.0, 2.0};
  CHECK_NOTHROW(s.validate());
  CHECK_CODE(s.validate(3), InsufficientData);
  const std::vector<double> a{1.0, 2.0}, b{3.0, 2.5};
  auto r = Sample::from_replicates({0.0, 1.0}, a, b);
  CHECK(r.w == std::vector<double>{2.0, 2.25});
  CHECK_NOTHROW(r.validate());
  r.w[1] += 1e-6;
  CHECK_CODE(r.validate(), DataFormatError);
}

TEST_CASE("linspace") {
  const auto g = linspace(-1.0, 1.0, 5);
  CHECK(g == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK(linspace(0.0, 3.0, 101).back() == 3.0);
}
