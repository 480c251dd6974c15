#include "parakahler/paracomplex.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "parallel.hpp"

namespace parakahler {

namespace {

GridField<Eigen::Vector3d> vec_field(const Grid2& g) { return GridField<Eigen::Vector3d>(g, Eigen::Vector3d::Zero()); }

void check_lift(const LiftGrid& lift, const char* what) {
  lift.grid.require_min(3, what);
  if (lift.x.v.size() != static_cast<size_t>(lift.grid.size()) ||
      lift.chi.v.size() != static_cast<size_t>(lift.grid.size()))
    throw Error(std::string(what) + ": lift fields do not match the grid");
}

}  // namespace

PsiFields psi_fields(const LiftGrid& lift) {
  check_lift(lift, "psi_fields");
  const Grid2& g = lift.grid;
  PsiFields out{RealField(g, 0.0), RealField(g, 0.0)};
  detail::parallel_for(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i) {
      out.psi1(i, j) = fd::dx(lift.x, i, j).dot(lift.chi(i, j));
      out.psi2(i, j) = fd::dy(lift.x, i, j).dot(lift.chi(i, j));
    }
  });
  return out;
}

LiftGrid scale_lift(const LiftGrid& lift, const RealField& alpha) {
  check_lift(lift, "scale_lift");
  for (double a : alpha.v)
    if (!(std::abs(a) > 0.0) || !std::isfinite(a)) throw Error("scale_lift: alpha vanishes on the grid");
  LiftGrid out{lift.grid, vec_field(lift.grid), vec_field(lift.grid)};
  for (size_t k = 0; k < lift.x.v.size(); ++k) {
    out.x.v[k] = alpha.v[k] * lift.x.v[k];
    out.chi.v[k] = lift.chi.v[k] / alpha.v[k];
  }
  return out;
}

LiftGrid s2n_normalize(const LiftGrid& lift) {
  LiftGrid out{lift.grid, vec_field(lift.grid), vec_field(lift.grid)};
  for (size_t k = 0; k < lift.x.v.size(); ++k) {
    const CMPoint<double> p = s2n_normalize(CMPoint<double>{lift.x.v[k], lift.chi.v[k]});
    out.x.v[k] = p.x;
    out.chi.v[k] = p.chi;
  }
  return out;
}

double horizontality_residual(const LiftGrid& lift) {
  const PsiFields psi = psi_fields(lift);
  double m = 0.0;
  for (size_t k = 0; k < psi.psi1.v.size(); ++k)
    m = std::max({m, std::abs(psi.psi1.v[k]), std::abs(psi.psi2.v[k])});
  return m;
}

double dpsi_vs_omega_residual(const LiftGrid& lift) {
  lift.grid.require_min(4, "dpsi_vs_omega_residual");
  const PsiFields psi = psi_fields(lift);
  const Grid2& g = lift.grid;
  const double hx = g.hx;
  const double hy = g.hy;
  // cells whose corners avoid the boundary nodes
  std::vector<double> rows(static_cast<size_t>(g.ny - 1), 0.0);
  detail::parallel_for(g.ny - 1, [&](int j) {
    if (j < 1 || j > g.ny - 3) return;
    double m = 0.0;
    for (int i = 1; i <= g.nx - 3; ++i) {
      // cell-centred differences, averaged over the two parallel edges
      auto ddx = [&](const auto& f) { using V = std::decay_t<decltype(f(i, j))>; return V(0.5 * ((f(i + 1, j) - f(i, j)) + (f(i + 1, j + 1) - f(i, j + 1))) / hx); };
      auto ddy = [&](const auto& f) { using V = std::decay_t<decltype(f(i, j))>; return V(0.5 * ((f(i, j + 1) - f(i, j)) + (f(i + 1, j + 1) - f(i + 1, j))) / hy); };
      const double dpsi = ddx(psi.psi2) - ddy(psi.psi1);
      const Eigen::Vector3d x1 = ddx(lift.x), x2 = ddy(lift.x);
      const Eigen::Vector3d c1 = ddx(lift.chi), c2 = ddy(lift.chi);
      const double omega = omega_hat(CMTangent<double>{x1, c1}, CMTangent<double>{x2, c2});
      m = std::max(m, std::abs(dpsi + 2.0 * omega));
    }
    rows[static_cast<size_t>(j)] = m;
  });
  return *std::max_element(rows.begin(), rows.end());
}

}  // namespace parakahler
