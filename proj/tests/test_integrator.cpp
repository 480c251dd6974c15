#include <doctest.h>

#include <cmath>
#include <sstream>

#include "parakahler/integrator.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace parakahler;
namespace ts = testsupport;
using ts::max_abs;

namespace {

double field_max(const RealField& f) {
  double m = 0;
  for (double v : f.v) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("zero connection leaves the initial frame in place") {
  const Grid2 g = Grid2::square(0, 1, 7);
  MCPair mc{g, Signature(1), GridField<Mat3cd>(g, Mat3cd::Zero()), GridField<Mat3cd>(g, Mat3cd::Zero())};
  mc.Utz = mc.Uz;
  mc.Utzb = mc.Uzb;
  Mat3cd Finit;
  Finit << 2, 1, 0, 0, 1, 0, 1, 0, 1;
  for (PathMode m : {PathMode::row_major, PathMode::column_major}) {
    const FrameField F = integrate_frame(mc, Finit, m);
    for (const Mat3cd& M : F.F.v) CHECK(max_abs(M - Finit) < 1e-14);
  }
  CHECK(field_max(flatness_residual(mc)) == 0.0);
}

TEST_CASE("flat example matches the matrix exponential") {
  const Grid2 g = Grid2::spaced(0.0, 1.0, 0.01);
  const MCPair mc = build_mc(ts::flat_minlag(g), Kind::minlag);
  const Mat3cd Uz = mc.Uz(0, 0), Uzb = mc.Uzb(0, 0);
  REQUIRE(max_abs(Uz * Uzb - Uzb * Uz) < 1e-15);
  for (PathMode m : {PathMode::row_major, PathMode::column_major}) {
    const FrameField F = integrate_frame(mc, Mat3cd::Identity(), m);
    CHECK(max_abs(F.F(F.base_i, F.base_j) - Mat3cd::Identity()) == 0.0);
    double err = 0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const cd z = g.z(i, j) - g.z(F.base_i, F.base_j);
        err = std::max(err, max_abs(F.F(i, j) - ts::expm_eig(z * Uz + std::conj(z) * Uzb)));
      }
    CHECK(err < 1e-8);
  }
  CHECK(field_max(flatness_residual(mc)) < 1e-14);
}

TEST_CASE("path disagreement separates compatible from perturbed data") {
  const Grid2 g = Grid2::spaced(0.0, 0.5, 0.02);
  for (const SurfaceData& d : ts::random_compatible(g, 4, 91)) {
    const Kind k = d.phi(0, 0) == 0.0 ? Kind::minlag : Kind::lagrangian;
    CHECK(path_disagreement(build_mc(d, k)) < 1e-8);
    CHECK(path_disagreement(build_mc(ts::perturb_Q(d, 0.2), Kind::general)) > 1e-3);
  }
}

TEST_CASE("flatness residual grows linearly with an off-shell perturbation") {
  const Grid2 g = Grid2::spaced(0.0, 0.5, 0.02);
  const SurfaceData d = ts::flat_minlag(g);
  const double r1 = field_max(flatness_residual(build_mc(ts::perturb_Q(d, 1e-3), Kind::general)));
  const double r2 = field_max(flatness_residual(build_mc(ts::perturb_Q(d, 2e-3), Kind::general)));
  CHECK(r1 > 1e-5);
  CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("lift invariants on compatible data") {
  const Grid2 g = Grid2::spaced(-0.25, 0.25, 0.01);
  const std::pair<SurfaceData, Kind> cases[] = {
      {ts::flat_minlag(g), Kind::minlag},
      {ts::flat_lagrangian(g, 1, 0.2, cd(1.2, -0.3), 0.6), Kind::lagrangian},
      {ts::flat_lagrangian(g, -1, -0.1, cd(0.0, 0.5), 1.1), Kind::lagrangian},
      {ts::synthesized_exact(g), Kind::minlag},
  };
  for (const auto& [d, k] : cases) {
    const LiftField lift = extract_lift(integrate_frame(build_mc(d, k)), d);
    const LiftInvariants inv = lift_invariants(lift, d);
    CHECK(inv.pairing < 1e-8);
    CHECK(inv.xi_chi < 1e-8);
    CHECK(inv.x_eta < 1e-8);
    CHECK(inv.xi_eta < 1e-8);
    CHECK(inv.xi_etabar < 1e-8);
  }
}

TEST_CASE("flat round trip") {
  const Grid2 g = Grid2::spaced(0.0, 0.5, 0.01);
  const SurfaceData d = ts::flat_lagrangian(g, 1, 0.3, cd(1.3, 0.2), 0.4);
  const RoundTripReport r = round_trip(extract_lift(integrate_frame(build_mc(d, Kind::lagrangian)), d), d);
  CHECK(r.max() < 1e-6);
  CHECK(r.err_rho < 1e-6);
  for (const cd& v : r.recovered.rho.v) CHECK(std::abs(v) < 1e-6);
}

TEST_CASE("determinant is carried along") {
  const Grid2 g = Grid2::spaced(0.0, 0.5, 0.01);
  Mat3cd Finit;
  Finit << 1, 0.5, 0, 0, 2, 0, 0.3, 0, 1;
  for (const auto& [d, k] : {std::pair{ts::flat_minlag(g), Kind::minlag},
                             std::pair{ts::flat_lagrangian(g, -1, 0.1, 0.3, 0.2), Kind::lagrangian}}) {
    const FrameField F = integrate_frame(build_mc(d, k), Finit);
    double dev = 0;
    for (const Mat3cd& M : F.F0.v) dev = std::max(dev, std::abs(M.determinant() - Finit.determinant()));
    CHECK(dev < 1e-9);
    // the trace of the connection lives in the logscale
    double tr = 0;
    for (size_t n = 0; n < F.F.v.size(); ++n)
      tr = std::max(tr, std::abs(F.F.v[n].determinant() - std::exp(3.0 * F.logscale.v[n]) * Finit.determinant()));
    CHECK(tr < 1e-9);
  }
  Mat3cd sing = Mat3cd::Zero();
  sing(0, 0) = 1;
  CHECK_THROWS_AS(integrate_frame(build_mc(ts::flat_minlag(g), Kind::minlag), sing), Error);
}

TEST_CASE("mean curvature of the Liouville surface converges at second order") {
  double prev = 0;
  for (double h : {0.04, 0.02, 0.01}) {
    const Grid2 g = Grid2::spaced(-0.3, 0.3, h);
    const SurfaceData d = ts::liouville(g);
    const double H = mean_curvature_residual(extract_lift(integrate_frame(build_mc(d, Kind::minlag)), d));
    CHECK(H < 1e-3);
    if (prev > 0) CHECK(prev / H > 3.5);
    prev = H;
  }
}

TEST_CASE("totally geodesic Lagrangian has vanishing second fundamental form") {
  // Q = 0 forces phi = 0 through the Gauss equation unless u varies; the Liouville surface is the case
  const Grid2 g = Grid2::spaced(-0.3, 0.3, 0.005);
  const SurfaceData d = ts::liouville(g);
  REQUIRE(compat_residuals(d, Kind::lagrangian).get("lag_gauss") < 1e-3);
  const LiftField lift = extract_lift(integrate_frame(build_mc(d, Kind::lagrangian)), d);
  CHECK(second_fundamental_max(lift) < 1e-6);

  // Q = 0 with constant u needs |phi|^2 = H e^u, so T and with it K do not vanish
  const Grid2 c = Grid2::spaced(0.0, 0.3, 0.01);
  SurfaceData t = SurfaceData::zeros(Signature(1), c);
  for (cd& p : t.phi.v) p = 1.0;
  REQUIRE(compat_residuals(t, Kind::lagrangian).max() < 1e-14);
  CHECK(second_fundamental_max(extract_lift(integrate_frame(build_mc(t, Kind::lagrangian)), t)) > 1e-2);
}

TEST_CASE("second fundamental form is symmetric") {
  const Grid2 g = Grid2::spaced(0.0, 0.5, 0.01);
  const SurfaceData d = ts::flat_lagrangian(g, -1, 0.0, 0.5, 0.3);
  const LiftField lift = extract_lift(integrate_frame(build_mc(d, Kind::lagrangian)), d);
  double asym = 0, size = 0;
  for (int j = 10; j < g.ny - 10; j += 7)
    for (int i = 10; i < g.nx - 10; i += 7) {
      const CMTangent<double> a = second_fundamental_form(lift, i, j, 0, 1);
      const CMTangent<double> b = second_fundamental_form(lift, i, j, 1, 0);
      asym = std::max(asym, (a.X - b.X).cwiseAbs().maxCoeff());
      asym = std::max(asym, (a.Xt - b.Xt).cwiseAbs().maxCoeff());
      size = std::max(size, second_fundamental_form(lift, i, j, 0, 0).X.cwiseAbs().maxCoeff());
    }
  CHECK(asym < 1e-6);
  CHECK(size > 1e-2);
}

TEST_CASE("extract_lift rejects a frame with the wrong reality") {
  const Grid2 g = Grid2::spaced(0.0, 0.2, 0.02);
  const SurfaceData d = ts::flat_minlag(g);
  Mat3cd Finit = Mat3cd::Identity();
  Finit(2, 0) = cd(0, 0.5);
  CHECK_THROWS_AS(extract_lift(integrate_frame(build_mc(d, Kind::minlag), Finit), d), Error);
}

TEST_CASE("surface csv") {
  const Grid2 g = Grid2::square(0, 0.1, 3);
  const SurfaceData d = ts::flat_minlag(g);
  const LiftField lift = extract_lift(integrate_frame(build_mc(d, Kind::minlag)), d);
  std::ostringstream os;
  write_surface_csv(os, lift, d);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "y1,y2,x1,x2,x3,chi1,chi2,chi3,u,theta");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    std::vector<double> v;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) v.push_back(std::stod(c));
    REQUIRE(v.size() == 10);
    const double nx = std::hypot(v[2], v[3], v[4]), nc = std::hypot(v[5], v[6], v[7]);
    CHECK(nx == doctest::Approx(nc).epsilon(1e-12));
    CHECK(v[2] * v[5] + v[3] * v[6] + v[4] * v[7] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(v[9] == doctest::Approx(M_PI / 2));
  }
  CHECK(rows == 9);
}
