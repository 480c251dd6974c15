#include "support/fixtures.hpp"

#include <cmath>

#include "support/oracles.hpp"

namespace testsupport {

using parakahler::cd;
using parakahler::Signature;

SurfaceData flat_minlag(const Grid2& g) {
  SurfaceData d = SurfaceData::zeros(Signature(-1), g);
  for (cd& q : d.Q.v) q = 1.0;
  return d;
}

double liouville_u(cd z) { return std::log(2.0) - 2.0 * std::log(1.0 - std::norm(z)); }

SurfaceData liouville(const Grid2& g) {
  SurfaceData d = SurfaceData::zeros(Signature(-1), g);
  d.u = parakahler::make_field<double>(g, [&](int i, int j) { return liouville_u(g.z(i, j)); });
  return d;
}

cd synth_Q(cd z) { return 1.0 + 0.5 * z; }
double synth_u(cd z) { return (2.0 / 3.0) * std::log(std::abs(synth_Q(z))); }

SurfaceData synthesized_minlag(const Grid2& g) {
  SurfaceData d = SurfaceData::zeros(Signature(-1), g);
  d.Q = parakahler::make_field<cd>(g, [&](int i, int j) { return synth_Q(g.z(i, j)); });
  parakahler::RealField u0(g, 0.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (!g.interior(i, j)) u0(i, j) = synth_u(g.z(i, j));
  d.u = parakahler::solve_tzitzeica(d.sig, d.Q, u0).u;
  return d;
}

SurfaceData synthesized_exact(const Grid2& g) {
  SurfaceData d = SurfaceData::zeros(Signature(-1), g);
  d.Q = parakahler::make_field<cd>(g, [&](int i, int j) { return synth_Q(g.z(i, j)); });
  d.u = parakahler::make_field<double>(g, [&](int i, int j) { return synth_u(g.z(i, j)); });
  return d;
}

SurfaceData minimal_synthetic(const Grid2& g) {
  SurfaceData d = SurfaceData::zeros(Signature(-1), g);
  d.theta = parakahler::make_field<double>(g, [&](int i, int j) {
    return M_PI / 2 + 0.3 * std::sin(g.x(i)) * std::cos(g.y(j)) + 0.2;
  });
  d.u = parakahler::make_field<double>(g, [&](int i, int j) { return 0.1 * g.x(i) - 0.05 * g.y(j); });
  for (cd& q : d.Q.v) q = 1.0;
  return d;
}

SurfaceData flat_lagrangian(const Grid2& g, int H, double u, cd phi, double argQ) {
  const double q2 = std::exp(2 * u) * (std::norm(phi) - H * std::exp(u));
  if (!(q2 > 0)) throw parakahler::Error("flat_lagrangian: |Q|^2 must be positive");
  SurfaceData d = SurfaceData::zeros(Signature(H), g);
  for (double& v : d.u.v) v = u;
  for (cd& p : d.phi.v) p = phi;
  for (cd& q : d.Q.v) q = std::polar(std::sqrt(q2), argQ);
  return d;
}

SurfaceData lagrangian_varying(const Grid2& g) {
  SurfaceData d = SurfaceData::zeros(Signature(-1), g);
  d.phi = parakahler::make_field<cd>(g, [&](int i, int j) { return cd(0.4 + 0.2 * g.x(i), 0.1 * g.y(j)); });
  d.u = parakahler::make_field<double>(g, [&](int i, int j) { return 0.1 * g.x(i) * g.y(j); });
  for (cd& q : d.Q.v) q = cd(1.0, 0.3);
  return d;
}

std::vector<SurfaceData> random_compatible(const Grid2& g, int count, unsigned long long seed) {
  Rng rng(seed);
  std::vector<SurfaceData> out;
  for (int k = 0; k < count; ++k) {
    const double u = rng.uniform(-0.5, 0.5);
    const double argQ = rng.uniform(-M_PI, M_PI);
    if (k % 3 == 0) {
      // minlag: |Q| = e^{3u/2}
      SurfaceData d = SurfaceData::zeros(Signature(-1), g);
      for (double& v : d.u.v) v = u;
      for (cd& q : d.Q.v) q = std::polar(std::exp(1.5 * u), argQ);
      out.push_back(std::move(d));
    } else if (k % 3 == 1) {
      out.push_back(flat_lagrangian(g, -1, u, rng.complex(0.8), argQ));
    } else {
      // H = +1 needs |phi|^2 > e^u
      const cd phi = std::polar(std::exp(0.5 * u) * rng.uniform(1.2, 1.6), rng.uniform(-M_PI, M_PI));
      out.push_back(flat_lagrangian(g, 1, u, phi, argQ));
    }
  }
  return out;
}

SurfaceData perturb_Q(const SurfaceData& d, double eps) {
  SurfaceData p = d;
  for (int j = 0; j < d.grid.ny; ++j)
    for (int i = 0; i < d.grid.nx; ++i) p.Q(i, j) += eps * std::conj(d.grid.z(i, j));
  return p;
}

}  // namespace testsupport
