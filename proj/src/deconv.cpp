#include "errinvar/deconv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "errinvar/error.hpp"

namespace errinvar {
namespace {

void require_bandwidth(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidBandwidth, "bandwidth must be positive");
}

// i^{-l}
cplx inverse_i_power(int ell) {
  switch (((ell % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

// Sum over observations within reach of x of f(u_j, j), u_j = (W_j - x)/h.
template <class F>
void for_each_near(const std::vector<double>& w, double x, double reach, double h, F&& f) {
  const auto lo = std::lower_bound(w.begin(), w.end(), x - reach) - w.begin();
  const auto hi = std::upper_bound(w.begin(), w.end(), x + reach) - w.begin();
  const double inv_h = 1.0 / h;
  for (auto j = lo; j < hi; ++j) f((w[static_cast<std::size_t>(j)] - x) * inv_h, static_cast<std::size_t>(j));
}

double density_at(const TransformedKernel& k0, const std::vector<double>& w, double x) {
  double s = 0.0;
  // K_{U,0} is even, so K_{U,0}((x - W)/h) = K_{U,0}((W - x)/h).
  for_each_near(w, x, k0.table.x_end() * k0.h, k0.h, [&](double u, std::size_t) { s += k0(u); });
  return s / (static_cast<double>(w.size()) * k0.h);
}

// The order-p product m-hat* f-hat_W within blend_inner bandwidths of the
// nearest observation, fading into the local-constant t0 by blend_outer.
double blended_product(const LocalSolve& fit, double s0, double t0, double dist, int p, const HzOptions& o) {
  if (p == 0 || fit.clamped || !(dist < o.blend_outer)) return t0;
  double wgt = 1.0;
  if (dist > o.blend_inner)
    wgt = 0.5 * (1.0 + std::cos(std::numbers::pi * (dist - o.blend_inner) / (o.blend_outer - o.blend_inner)));
  return wgt * fit.value * s0 + (1.0 - wgt) * t0;
}

// Distance from s to the nearest entry of the sorted z.
double nearest_distance(const std::vector<double>& z, double s) {
  const auto it = std::lower_bound(z.begin(), z.end(), s);
  double d = std::numeric_limits<double>::infinity();
  if (it != z.end()) d = *it - s;
  if (it != z.begin()) d = std::min(d, s - *(it - 1));
  return d;
}

}  // namespace

TransformedKernel transformed_kernel(const KernelSpec& kernel, const ErrorModel& error, int ell, double h,
                                     const QuadratureConfig& cfg) {
  require_bandwidth(h);
  if (ell < 0) throw Error(ErrorCode::UnsupportedOrder, "negative derivative order");
  if (cfg.t_nodes < 3 || cfg.x_points < 2 || !(cfg.x_half_range > 0.0))
    throw Error(ErrorCode::InvalidParameter, "bad quadrature configuration");
  kernel.fourier_derivative(ell, 0.0);  // order check

  const double r = kernel.support_radius();
  const std::size_t nt = cfg.t_nodes;
  const double dt = 2.0 * r / static_cast<double>(nt - 1);
  std::vector<cplx> a(nt), da(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    const double t = -r + static_cast<double>(k) * dt;
    const double phi_u = error.charfn(-t / h);
    if (!(std::abs(phi_u) >= kCharfnFloor))
      throw Error(ErrorCode::IllPosedDeconvolution,
                  "error characteristic function vanishes inside the kernel band (h = " + std::to_string(h) + ")");
    const double weight = (k == 0 || k + 1 == nt) ? 0.5 * dt : dt;
    a[k] = weight * kernel.fourier_derivative(ell, t) / phi_u;
    da[k] = a[k] * cplx(0.0, -t);
  }

  const std::size_t nx = cfg.x_points;
  const double x0 = -cfg.x_half_range;
  const double dx = 2.0 * cfg.x_half_range / static_cast<double>(nx - 1);
  const auto v = chirp_fourier_sum(a, -r, dt, x0, dx, nx);
  const auto d = chirp_fourier_sum(da, -r, dt, x0, dx, nx);
  const cplx c = inverse_i_power(ell) / (2.0 * std::numbers::pi);

  std::vector<double> vr(nx), dr(nx);
  double max_imag = 0.0, max_real = 0.0;
  for (std::size_t j = 0; j < nx; ++j) {
    const cplx vj = c * v[j];
    vr[j] = vj.real();
    dr[j] = (c * d[j]).real();
    max_imag = std::max(max_imag, std::abs(vj.imag()));
    max_real = std::max(max_real, std::abs(vj.real()));
  }
  if (!(max_imag <= 1e-8 * std::max(1.0, max_real)))
    throw Error(ErrorCode::IllPosedDeconvolution, "transformed kernel is not real; error charfn must be even");

  TransformedKernel out;
  out.ell = ell;
  out.h = h;
  out.max_imag = max_imag;
  out.table = HermiteTable(x0, dx, std::move(vr), std::move(dr));
  return out;
}

std::vector<double> deconv_kde(const Sample& sample, const KernelSpec& kernel, const ErrorModel& error,
                               double h, std::span<const double> x, const QuadratureConfig& cfg) {
  require_bandwidth(h);
  sample.validate(1);
  const auto k0 = transformed_kernel(kernel, error, 0, h, cfg);
  const auto data = canonical_order(sample);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = density_at(k0, data.w, x[i]);
  return out;
}

PointEstimates dfc_points(const Sample& sample, const KernelSpec& kernel, const ErrorModel& error, double h,
                          int p, std::span<const double> x, const QuadratureConfig& cfg) {
  require_bandwidth(h);
  if (p < 0) throw Error(ErrorCode::InvalidParameter, "order p must be >= 0");
  sample.validate(1);
  if (sample.size() < static_cast<std::size_t>(p) + 1)
    throw Error(ErrorCode::InsufficientData, "need at least p+1 observations");
  std::vector<TransformedKernel> tk;
  for (int l = 0; l <= 2 * p; ++l) tk.push_back(transformed_kernel(kernel, error, l, h, cfg));
  const auto data = canonical_order(sample);
  const double reach = cfg.x_half_range * h;
  const double scale = 1.0 / (static_cast<double>(sample.size()) * h);

  PointEstimates out{std::vector<double>(x.size()), std::vector<bool>(x.size())};
  std::vector<double> s(static_cast<std::size_t>(2 * p + 1)), t(static_cast<std::size_t>(p + 1));
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::fill(s.begin(), s.end(), 0.0);
    std::fill(t.begin(), t.end(), 0.0);
    for_each_near(data.w, x[i], reach, h, [&](double u, std::size_t j) {
      for (std::size_t l = 0; l < s.size(); ++l) {
        const double k = tk[l](u);
        s[l] += k;
        if (l < t.size()) t[l] += data.y[j] * k;
      }
    });
    for (auto& v : s) v *= scale;
    for (auto& v : t) v *= scale;
    const auto r = solve_local_system(s, t, p);
    out.values[i] = r.value;
    out.clamped[i] = r.clamped;
  }
  return out;
}

PointEstimates hz_points(const Sample& sample, const KernelSpec& kernel, const ErrorModel& error, double h,
                         int p, std::span<const double> x, const HzOptions& opts) {
  require_bandwidth(h);
  if (!(opts.blend_outer >= opts.blend_inner) || !(opts.blend_inner >= 0.0) || !(opts.band > 0.0) ||
      !(opts.density_floor >= 0.0))
    throw Error(ErrorCode::InvalidParameter, "bad HZ options");
  if (p < 0) throw Error(ErrorCode::InvalidParameter, "order p must be >= 0");
  sample.validate(1);
  if (sample.size() < static_cast<std::size_t>(p) + 1)
    throw Error(ErrorCode::InsufficientData, "need at least p+1 observations");
  kernel.fourier_derivative(2 * p, 0.0);  // order check
  // Grid local sums S_l alias like |u|^(l-9) across the period, which is
  // visible from l = 5 on.
  if (p > 2) throw Error(ErrorCode::UnsupportedOrder, "the HZ estimator supports p <= 2");
  const auto data = canonical_order(sample);
  const auto& w = data.w;
  const std::size_t n = w.size();
  const auto grid = opts.grid ? opts.grid : default_grid();
  const std::size_t G = grid->G;

  // The transform runs in z = (w - c)/h: the same estimator with the kernel
  // at unit scale, so grid resolution does not depend on h.
  const double c = 0.5 * (w.front() + w.back());
  const double half_span = 0.5 * (w.back() - w.front()) / h;
  if (half_span > 0.4 * grid->extent())
    throw Error(ErrorCode::InvalidParameter,
                "data range spans too many bandwidths for the Fourier grid; use a larger grid");
  std::vector<double> z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = (w[j] - c) / h;

  // Local sums S_l(s) = (nh)^-1 sum (z_j - s)^l K(z_j - s) and T_l (with Y_j)
  // on the whole grid. Their transforms are (nh)^-1 (-i)^l phi_K^(l)(tau)
  // times the empirical characteristic sums, supported on the kernel band.
  const double r = kernel.support_radius();
  std::vector<std::size_t> band;
  for (std::size_t k = 0; k < G; ++k)
    if (std::abs(grid->t_nodes[k]) <= r) band.push_back(k);
  // Band nodes are consecutive, so e^{-i tau z} advances by a fixed rotation.
  std::vector<cplx> ecf(band.size()), ecf_y(band.size());
  if (!band.empty()) {
    const double tau0 = grid->t_nodes[band.front()];
    for (std::size_t j = 0; j < n; ++j) {
      cplx ph = std::polar(1.0, -tau0 * z[j]);
      const cplx step = std::polar(1.0, -grid->alpha2 * z[j]);
      const double yj = data.y[j];
      for (std::size_t b = 0; b < band.size(); ++b) {
        ecf[b] += ph;
        ecf_y[b] += yj * ph;
        ph *= step;
      }
    }
  }
  const double scale = 1.0 / (static_cast<double>(n) * h);
  // Each local sum is real, so two of them share one inverse transform as
  // real and imaginary parts.
  struct Term {
    int ell;
    bool with_y;
  };
  std::vector<Term> terms;
  for (int l = 0; l <= 2 * p; ++l) terms.push_back({l, false});
  for (int l = 0; l <= p; ++l) terms.push_back({l, true});
  std::vector<std::vector<double>> sums(terms.size());
  for (std::size_t q = 0; q < terms.size(); q += 2) {
    GridFunction f{grid, std::vector<cplx>(G), Domain::Frequency};
    for (std::size_t part = 0; part < 2 && q + part < terms.size(); ++part) {
      const auto& term = terms[q + part];
      // i^-l = (-i)^l, times i for the imaginary slot
      const cplx coef = inverse_i_power(term.ell) * scale * (part ? cplx(0.0, 1.0) : cplx(1.0));
      for (std::size_t b = 0; b < band.size(); ++b) {
        const double tau = grid->t_nodes[band[b]];
        f.values[band[b]] += coef * kernel.fourier_derivative(term.ell, tau) * (term.with_y ? ecf_y[b] : ecf[b]);
      }
    }
    const auto v = icft(f).values;
    sums[q].resize(G);
    for (std::size_t g = 0; g < G; ++g) sums[q][g] = v[g].real();
    if (q + 1 < terms.size()) {
      sums[q + 1].resize(G);
      for (std::size_t g = 0; g < G; ++g) sums[q + 1][g] = v[g].imag();
    }
  }
  const std::vector<std::vector<double>> S(sums.begin(), sums.begin() + 2 * p + 1);
  const std::vector<std::vector<double>> T(sums.begin() + 2 * p + 1, sums.end());

  // A = m-hat* f-hat_W near the data, fading into the local-constant product
  // T_0 away from it. For p = 0 the two coincide.
  GridFunction prod{grid, std::vector<cplx>(G), Domain::Time};
  std::vector<double> sv(S.size()), tv(T.size());
  for (std::size_t g = 0; g < G; ++g) {
    const double d = p > 0 ? nearest_distance(z, grid->s_nodes[g]) : 0.0;
    LocalSolve fit{0.0, true};
    if (p > 0 && d < opts.blend_outer) {
      for (std::size_t l = 0; l < S.size(); ++l) sv[l] = S[l][g];
      for (std::size_t l = 0; l < T.size(); ++l) tv[l] = T[l][g];
      fit = solve_local_system(sv, tv, p);
    }
    prod.values[g] = blended_product(fit, S[0][g], T[0][g], d, p, opts);
  }

  // The numerator is m-hat* f-hat_W at x plus C = icft(wt (1/phi_U - 1) cft(A))
  // on the band. Far from the data the order-p fit extrapolates wildly, so the
  // A fed to the correction is the blended product; at x itself the plain
  // product is used, which makes the estimate exact when phi_U = 1. A is not
  // smooth where the blend or the ridge fallback switches, so only the
  // band-limited C is interpolated. The
  // band edge falls between nodes, so the last node inside and the first
  // outside get partial trapezoid weights from the linear interpolant on the
  // cut cell; without them the band integral is only first order in alpha2.
  const auto spec = cft(prod);
  GridFunction corr{grid, std::vector<cplx>(G), Domain::Frequency};
  const double a2 = grid->alpha2;
  auto correct = [&](std::size_t k, double wt) {
    const double phi_u = error.charfn(-grid->t_nodes[k] / h);
    if (!(std::abs(phi_u) >= kCharfnFloor))
      throw Error(ErrorCode::IllPosedDeconvolution, "error characteristic function vanishes inside the band");
    corr.values[k] = spec.values[k] * (wt * (1.0 / phi_u - 1.0));
  };
  std::size_t lo = G, hi = 0;
  for (std::size_t k = 0; k < G; ++k) {
    if (std::abs(grid->t_nodes[k]) > opts.band) continue;
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  if (lo <= hi) {
    const double r_hi = (opts.band - grid->t_nodes[hi]) / a2;
    const double r_lo = (grid->t_nodes[lo] + opts.band) / a2;
    for (std::size_t k = lo + 1; k < hi; ++k) correct(k, 1.0);
    if (lo < hi) {
      correct(lo, 0.5 + r_lo - 0.5 * r_lo * r_lo);
      correct(hi, 0.5 + r_hi - 0.5 * r_hi * r_hi);
    } else {
      correct(lo, 1.0);
    }
    if (lo > 0) correct(lo - 1, 0.5 * r_lo * r_lo);
    if (hi + 1 < G) correct(hi + 1, 0.5 * r_hi * r_hi);
  }

  // C is real; its value and derivative share one transform.
  for (std::size_t k = 0; k < G; ++k) corr.values[k] *= cplx(1.0, 0.0) - grid->t_nodes[k];
  const auto cd = icft(corr).values;
  std::vector<double> cv(G), dv(G);
  for (std::size_t g = 0; g < G; ++g) {
    cv[g] = cd[g].real();
    dv[g] = cd[g].imag();
  }
  const HermiteTable correction(grid->s_nodes.front(), grid->alpha1, std::move(cv), std::move(dv));

  const LocalPolySmoother direct(sample, kernel, h, p);
  std::vector<double> num(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double zx = (x[i] - c) / h;
    const auto pt = direct.evaluate(x[i]);
    num[i] = blended_product({pt.value, pt.clamped}, pt.s0, pt.t0, 0.0, p, opts) + correction(zx);
  }

  const auto k0 = transformed_kernel(kernel, error, 0, h, opts.quadrature);
  std::vector<double> fx(x.size());
  double fmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    fx[i] = density_at(k0, w, x[i]);
    fmax = std::max(fmax, fx[i]);
  }
  if (!(fmax > 0.0) || !std::isfinite(fmax))
    throw Error(ErrorCode::DegenerateDensity, "deconvoluted density is non-positive at every evaluation point");
  const double floor = opts.density_floor * fmax;

  PointEstimates out{std::vector<double>(x.size()), std::vector<bool>(x.size())};
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.clamped[i] = fx[i] < floor;
    out.values[i] = num[i] / std::max(fx[i], floor);
  }
  return out;
}

namespace {

CurveEstimate to_curve(PointEstimates pts, std::span<const double> x_grid, double h, int p, Method m) {
  CurveEstimate est;
  est.x_grid.assign(x_grid.begin(), x_grid.end());
  est.values = std::move(pts.values);
  est.clamped = std::move(pts.clamped);
  est.bandwidth = h;
  est.order = p;
  est.method = m;
  return est;
}

}  // namespace

CurveEstimate dfc_estimate(const Sample& sample, const KernelSpec& kernel, const ErrorModel& error, double h,
                           int p, std::span<const double> x_grid, const QuadratureConfig& cfg) {
  require_increasing_grid(x_grid);
  return to_curve(dfc_points(sample, kernel, error, h, p, x_grid, cfg), x_grid, h, p, Method::DFC);
}

CurveEstimate hz_estimate(const Sample& sample, const KernelSpec& kernel, const ErrorModel& error, double h,
                          int p, std::span<const double> x_grid, const HzOptions& opts) {
  require_increasing_grid(x_grid);
  return to_curve(hz_points(sample, kernel, error, h, p, x_grid, opts), x_grid, h, p, Method::HZ);
}

}  // namespace errinvar
