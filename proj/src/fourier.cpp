#include "errinvar/fourier.hpp"

#include <cmath>
#include <numbers>

#include "errinvar/error.hpp"
#include "fft.hpp"

namespace errinvar {

FourierGrid FourierGrid::make(std::size_t G, double alpha1) {
  const bool pow2 = G >= 4 && (G & (G - 1)) == 0;
  if (!pow2) throw Error(ErrorCode::InvalidParameter, "grid size must be a power of two >= 4");
  if (!(alpha1 > 0.0) || !std::isfinite(alpha1))
    throw Error(ErrorCode::InvalidParameter, "grid increment must be positive");
  FourierGrid g;
  g.G = G;
  g.alpha1 = alpha1;
  g.alpha2 = 2.0 * std::numbers::pi / (static_cast<double>(G) * alpha1);
  g.s_nodes.resize(G);
  g.t_nodes.resize(G);
  const auto half = static_cast<double>(G / 2);
  for (std::size_t i = 0; i < G; ++i) {
    g.s_nodes[i] = (static_cast<double>(i) - half) * g.alpha1;
    g.t_nodes[i] = (static_cast<double>(i) - half) * g.alpha2;
  }
  return g;
}

FourierGrid FourierGrid::symmetric(std::size_t G) {
  return make(G, std::sqrt(2.0 * std::numbers::pi / static_cast<double>(G)));
}

std::shared_ptr<const FourierGrid> default_grid() {
  static const auto grid = std::make_shared<const FourierGrid>(FourierGrid::symmetric(1u << 16));
  return grid;
}

namespace {

void check(const GridFunction& f, Domain expected) {
  if (!f.grid) throw Error(ErrorCode::GridMismatch, "grid function has no grid");
  if (f.domain != expected)
    throw Error(ErrorCode::GridMismatch, expected == Domain::Time ? "expected time-domain samples"
                                                                   : "expected frequency-domain samples");
  if (f.values.size() != f.grid->G) throw Error(ErrorCode::GridMismatch, "sample count differs from grid size");
}

// sign * scale * (-1)^k * DFT[(-1)^g z_g]; the two sign flips are the grid
// offsets, valid because G/2 is even.
std::vector<cplx> modulated_dft(const std::vector<cplx>& in, bool forward, double scale) {
  std::vector<cplx> z(in.size());
  for (std::size_t g = 0; g < in.size(); ++g) z[g] = (g & 1) ? -in[g] : in[g];
  detail::fft_inplace(z, forward);
  for (std::size_t k = 0; k < z.size(); ++k) z[k] *= (k & 1) ? -scale : scale;
  return z;
}

}  // namespace

GridFunction cft(const GridFunction& f) {
  check(f, Domain::Time);
  return {f.grid, modulated_dft(f.values, true, f.grid->alpha1), Domain::Frequency};
}

GridFunction icft(const GridFunction& phi) {
  check(phi, Domain::Frequency);
  return {phi.grid, modulated_dft(phi.values, false, phi.grid->alpha2 / (2.0 * std::numbers::pi)),
          Domain::Time};
}

std::vector<cplx> icft_at(const GridFunction& phi, std::span<const double> x) {
  check(phi, Domain::Frequency);
  const auto& grid = *phi.grid;
  GridFunction dphi{phi.grid, phi.values, Domain::Frequency};
  for (std::size_t k = 0; k < grid.G; ++k) dphi.values[k] *= cplx(0.0, grid.t_nodes[k]);
  const auto v = icft(phi).values;
  const auto d = icft(dphi).values;
  std::vector<double> vr(grid.G), vi(grid.G), dr(grid.G), di(grid.G);
  for (std::size_t g = 0; g < grid.G; ++g) {
    vr[g] = v[g].real();
    vi[g] = v[g].imag();
    dr[g] = d[g].real();
    di[g] = d[g].imag();
  }
  const double x0 = grid.s_nodes.front();
  const HermiteTable re(x0, grid.alpha1, std::move(vr), std::move(dr));
  const HermiteTable im(x0, grid.alpha1, std::move(vi), std::move(di));
  std::vector<cplx> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = {re(x[j]), im(x[j])};
  return out;
}

std::vector<cplx> chirp_fourier_sum(std::span<const cplx> a, double t0, double dt, double x0, double dx,
                                    std::size_t m) {
  const std::size_t n = a.size();
  if (n == 0 || m == 0) return std::vector<cplx>(m);
  std::size_t len = 1;
  while (len < n + m - 1) len <<= 1;
  const double beta = dt * dx;
  auto chirp = [beta](double k) { return std::polar(1.0, -0.5 * beta * k * k); };

  std::vector<cplx> b(len), c(len);
  for (std::size_t k = 0; k < n; ++k) {
    const auto kd = static_cast<double>(k);
    b[k] = a[k] * std::polar(1.0, -kd * dt * x0) * chirp(kd);
  }
  for (std::size_t j = 0; j < m; ++j) c[j] = std::conj(chirp(static_cast<double>(j)));
  for (std::size_t k = 1; k < n; ++k) c[len - k] = std::conj(chirp(static_cast<double>(k)));

  detail::fft_inplace(b, true);
  detail::fft_inplace(c, true);
  for (std::size_t i = 0; i < len; ++i) b[i] *= c[i];
  detail::fft_inplace(b, false);

  std::vector<cplx> out(m);
  const double inv = 1.0 / static_cast<double>(len);
  for (std::size_t j = 0; j < m; ++j) {
    const auto jd = static_cast<double>(j);
    out[j] = b[j] * inv * std::polar(1.0, -t0 * (x0 + jd * dx)) * chirp(jd);
  }
  return out;
}

HermiteTable::HermiteTable(double x0, double dx, std::vector<double> values, std::vector<double> derivs)
    : x0_(x0), dx_(dx), inv_dx_(1.0 / dx), v_(std::move(values)), d_(std::move(derivs)) {
  if (v_.size() < 2 || d_.size() != v_.size() || !(dx > 0.0))
    throw Error(ErrorCode::InvalidParameter, "Hermite table needs >= 2 nodes and matching derivatives");
  last_ = static_cast<double>(v_.size() - 1);
}

}  // namespace errinvar
