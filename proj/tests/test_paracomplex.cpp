#include <doctest.h>

#include <cmath>

#include "parakahler/paracomplex.hpp"
#include "support/oracles.hpp"

using namespace parakahler;
using testsupport::Rng;

namespace {

CMPoint<double> random_point(Rng& rng) {
  Eigen::Vector3d x = rng.vec3();
  Eigen::Vector3d chi = rng.vec3();
  while (std::abs(x.dot(chi)) < 0.2) chi = rng.vec3();
  return {x, chi / x.dot(chi)};
}

// tangent vector: arbitrary X, Xt corrected along chi so that <X,chi> + <x,Xt> = 0
CMTangent<double> random_tangent(Rng& rng, const CMPoint<double>& p) {
  Eigen::Vector3d X = rng.vec3();
  Eigen::Vector3d Xt = rng.vec3();
  Xt -= (X.dot(p.chi) + p.x.dot(Xt)) / p.x.squaredNorm() * p.x;
  return {X, Xt};
}

}  // namespace

TEST_CASE("para-complex arithmetic") {
  const pcd ip{0.0, 1.0};
  CHECK(ip * ip == pcd(1.0, 0.0));

  Rng rng(1);
  for (int k = 0; k < 200; ++k) {
    const pcd z{rng.uniform(), rng.uniform()};
    const pcd w{rng.uniform(), rng.uniform()};
    const pcd lhs = conj(z * w);
    const pcd rhs = conj(z) * conj(w);
    CHECK(std::abs(lhs.re - rhs.re) < 1e-15);
    CHECK(std::abs(lhs.im - rhs.im) < 1e-15);
    CHECK(std::abs((z * conj(z)).im) < 1e-16);
    CHECK((z * conj(z)).re == doctest::Approx(norm2(z)).epsilon(1e-14));
  }
}

TEST_CASE("division by zero divisors is an explicit empty value") {
  CHECK_FALSE(inverse(pcd(1.0, 1.0)).has_value());
  CHECK_FALSE(inverse(pcd(2.0, -2.0)).has_value());
  CHECK_FALSE(divide(pcd(3.0, 1.0), pcd(0.5, 0.5)).has_value());
  const auto inv = inverse(pcd(2.0, 1.0));
  REQUIRE(inv.has_value());
  const pcd one = pcd(2.0, 1.0) * *inv;
  CHECK(one.re == doctest::Approx(1.0));
  CHECK(std::abs(one.im) < 1e-15);
}

TEST_CASE("exp(i' t) is (cosh t, sinh t) and turns addition into multiplication") {
  const double s = 0.3, t = -1.1;
  const pcd a = exp_ip(s) * exp_ip(t);
  const pcd b = exp_ip(s + t);
  CHECK(a.re == doctest::Approx(b.re).epsilon(1e-14));
  CHECK(a.im == doctest::Approx(b.im).epsilon(1e-14));
  CHECK(norm2(exp_ip(2.7)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pairing bridge <x,chi> = <z,z>_h") {
  Rng rng(2);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Vector3d x = rng.vec3(3.0), chi = rng.vec3(3.0);
    const ParaVector3<double> z = real_pair_to_pc(x, chi);
    const pcd h = hermitian(z, z);
    worst = std::max({worst, std::abs(h.re - x.dot(chi)), std::abs(h.im)});
    const auto [x2, chi2] = pc_to_real_pair(z);
    worst = std::max(worst, (x2 - x).norm() + (chi2 - chi).norm());
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("standard Hermitian form is para-sesquilinear") {
  Rng rng(3);
  const ParaVector3<double> u{rng.vec3(), rng.vec3()}, v{rng.vec3(), rng.vec3()};
  const pcd a{0.4, -1.3};
  ParaVector3<double> av;
  for (int k = 0; k < 3; ++k) {
    const pcd c = a * v[k];
    av.re(k) = c.re;
    av.im(k) = c.im;
  }
  const pcd lhs = hermitian(u, av);
  const pcd rhs = a * hermitian(u, v);
  CHECK(lhs.re == doctest::Approx(rhs.re).epsilon(1e-13));
  CHECK(lhs.im == doctest::Approx(rhs.im).epsilon(1e-13));
  const pcd uv = hermitian(u, v), vu = hermitian(v, u);
  CHECK(uv.re == doctest::Approx(conj(vu).re).epsilon(1e-13));
  CHECK(uv.im == doctest::Approx(conj(vu).im).epsilon(1e-13));
}

TEST_CASE("twisted form with P_H") {
  // e0, e1 pair to 1, e2 pairs with itself to -H
  ParaVector3<double> e0, e1, e2;
  e0.re(0) = 1;
  e1.re(1) = 1;
  e2.re(2) = 1;
  for (int H : {1, -1}) {
    CHECK(twisted_hermitian(e0, e1, H).re == 1.0);
    CHECK(twisted_hermitian(e0, e0, H).re == 0.0);
    CHECK(twisted_hermitian(e2, e2, H).re == -H);
  }
}

TEST_CASE("tangent decomposition") {
  Rng rng(4);
  for (int k = 0; k < 100; ++k) {
    const CMPoint<double> p = random_point(rng);
    const CMTangent<double> v = random_tangent(rng, p);
    const TangentSplit<double> s = decompose_tangent(p, v);
    const CMTangent<double> sum = s.hplus + s.vert + s.hminus;
    CHECK((sum.X - v.X).norm() < 1e-12);
    CHECK((sum.Xt - v.Xt).norm() < 1e-12);
    CHECK(std::abs(s.hplus.X.dot(p.chi)) < 1e-12);
    CHECK(std::abs(p.x.dot(s.hminus.Xt)) < 1e-12);
    CHECK(s.hplus.Xt.norm() == 0.0);
    CHECK(s.hminus.X.norm() == 0.0);
    // vertical part is a multiple of (x, -chi), the contact direction
    const double a = v.X.dot(p.chi);
    CHECK((s.vert.X - a * p.x).norm() < 1e-14);
    CHECK((s.vert.Xt + a * p.chi).norm() < 1e-14);
  }
}

TEST_CASE("decomposition rejects points off the quadric") {
  const CMPoint<double> p{{1, 0, 0}, {2, 0, 0}};
  CHECK_THROWS_AS(decompose_tangent(p, CMTangent<double>{}), Error);
  const CMPoint<double> q{{1, 0, 0}, {1, 0, 0}};
  const CMTangent<double> bad{{1, 0, 0}, {0, 0, 0}};
  CHECK_THROWS_AS(decompose_tangent(q, bad), Error);
}

TEST_CASE("forms on the quadric") {
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    const CMPoint<double> p = random_point(rng);
    const CMTangent<double> v = random_tangent(rng, p), w = random_tangent(rng, p);
    CHECK(g_hat(v, w) == doctest::Approx(g_hat(w, v)).epsilon(1e-14));
    CHECK(omega_hat(v, w) == doctest::Approx(-omega_hat(w, v)).epsilon(1e-14));
    // omega_hat = -Im <v, w>_h
    const pcd h = hermitian(real_pair_to_pc(v.X, v.Xt), real_pair_to_pc(w.X, w.Xt));
    CHECK(omega_hat(v, w) == doctest::Approx(-h.im).epsilon(1e-12));
    // the para-complex structure is an anti-isometry and links the two forms
    CHECK(g_hat(para_structure(v), para_structure(w)) == doctest::Approx(-g_hat(v, w)).epsilon(1e-12));
    CHECK(g_hat(para_structure(v), w) == doctest::Approx(omega_hat(v, w)).epsilon(1e-12));
    // contact form equals <X, chi> on tangents, and is 1 on the vertical generator
    CHECK(contact_form(p, v) == doctest::Approx(v.X.dot(p.chi)).epsilon(1e-12));
    CHECK(contact_form(p, CMTangent<double>{p.x, -p.chi}) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("signed comparison of d zeta with omega_hat") {
  // with (a ^ b)(v, w) = a(v) b(w) - a(w) b(v) one gets d zeta = -2 omega_hat
  Rng rng(6);
  for (int k = 0; k < 50; ++k) {
    const CMTangent<double> v{rng.vec3(), rng.vec3()}, w{rng.vec3(), rng.vec3()};
    CHECK(contact_differential(v, w) == doctest::Approx(-2.0 * omega_hat(v, w)).epsilon(1e-12));
  }
}

TEST_CASE("SL(3,R) acts by isometries") {
  Rng rng(7);
  for (int k = 0; k < 100; ++k) {
    Eigen::Matrix3d g = rng.real3();
    while (std::abs(g.determinant()) < 0.1) g = rng.real3();
    g /= std::cbrt(g.determinant());
    const CMPoint<double> p = random_point(rng);
    const CMTangent<double> v = random_tangent(rng, p), w = random_tangent(rng, p);
    const CMPoint<double> gp = act(g, p);
    const CMTangent<double> gv = act(g, v), gw = act(g, w);
    CHECK(gp.x.dot(gp.chi) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(g_hat(gv, gw) == doctest::Approx(g_hat(v, w)).epsilon(1e-10));
    CHECK(omega_hat(gv, gw) == doctest::Approx(omega_hat(v, w)).epsilon(1e-10));
    CHECK(contact_form(gp, gv) == doctest::Approx(contact_form(p, v)).epsilon(1e-10));
  }
}

TEST_CASE("S2n representative has equal norms and stays on the quadric") {
  Rng rng(8);
  for (int k = 0; k < 100; ++k) {
    const CMPoint<double> p = random_point(rng);
    const CMPoint<double> q = s2n_normalize(p);
    CHECK(q.x.squaredNorm() == doctest::Approx(q.chi.squaredNorm()).epsilon(1e-12));
    CHECK(q.x.dot(q.chi) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

namespace {

// Horizontal lift of the flat affine sphere x1 x2 x3 = 1: x = (e^{y1}, e^{y2}, e^{-y1-y2}),
// chi = x^{-1}/3 componentwise. psi vanishes identically.
LiftGrid flat_sphere_lift(double h) {
  const Grid2 g = Grid2::spaced(-0.5, 0.5, h);
  LiftGrid lift{g, GridField<Eigen::Vector3d>(g, Eigen::Vector3d::Zero()), GridField<Eigen::Vector3d>(g, Eigen::Vector3d::Zero())};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double a = g.x(i), b = g.y(j);
      const Eigen::Vector3d x(std::exp(a), std::exp(b), std::exp(-a - b));
      lift.x(i, j) = x;
      lift.chi(i, j) = x.cwiseInverse() / 3.0;
    }
  return lift;
}

}  // namespace

TEST_CASE("horizontality and d psi = -2 omega_hat on a horizontal lift") {
  double prev_h = 0;
  for (double h : {0.1, 0.05}) {
    const LiftGrid lift = flat_sphere_lift(h);
    const double rh = horizontality_residual(lift);
    const double ro = dpsi_vs_omega_residual(lift);
    if (prev_h > 0) CHECK(prev_h / rh > 3.5);
    CHECK(rh < 1e-2);
    // psi vanishes identically on the discrete lift too, so only rounding is left
    CHECK(ro < 1e-12);
    prev_h = rh;
  }
}

TEST_CASE("constant lift has vanishing residuals") {
  const Grid2 g = Grid2::square(0, 1, 5);
  LiftGrid lift{g, GridField<Eigen::Vector3d>(g, Eigen::Vector3d(1, 2, 3)), GridField<Eigen::Vector3d>(g, Eigen::Vector3d(1, 0, 0))};
  CHECK(horizontality_residual(lift) == 0.0);
  CHECK(dpsi_vs_omega_residual(lift) == 0.0);
}

TEST_CASE("scaling the lift shifts psi by d log alpha") {
  const LiftGrid lift = flat_sphere_lift(0.05);
  const Grid2& g = lift.grid;

  const LiftGrid same = scale_lift(lift, RealField(g, 1.0));
  CHECK(same.x.v == lift.x.v);

  const PsiFields base = psi_fields(lift);
  const PsiFields twice = psi_fields(scale_lift(lift, RealField(g, 2.0)));
  double d2 = 0.0;
  for (size_t k = 0; k < base.psi1.v.size(); ++k)
    d2 = std::max({d2, std::abs(twice.psi1.v[k] - base.psi1.v[k]), std::abs(twice.psi2.v[k] - base.psi2.v[k])});
  CHECK(d2 < 1e-13);

  const RealField alpha = make_field<double>(g, [&](int i, int) { return std::exp(g.x(i)); });
  const LiftGrid scaled = scale_lift(lift, alpha);
  const PsiFields sp = psi_fields(scaled);
  // central differences give sinh(h)/h * (1 + 2 cosh h)/3 in place of d log alpha = 1
  const double h = g.hx, expect = std::sinh(h) / h * (1.0 + 2.0 * std::cosh(h)) / 3.0;
  double shift1 = 0.0, shift2 = 0.0;
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) {
      shift1 = std::max(shift1, std::abs(sp.psi1(i, j) - base.psi1(i, j) - expect));
      shift2 = std::max(shift2, std::abs(sp.psi2(i, j) - base.psi2(i, j)));
    }
  CHECK(shift1 < 1e-12);
  CHECK(shift2 < 1e-12);
  CHECK(horizontality_residual(scaled) == doctest::Approx(1.0).epsilon(2e-2));

  RealField zero_somewhere(g, 1.0);
  zero_somewhere(3, 4) = 0.0;
  CHECK_THROWS_AS(scale_lift(lift, zero_somewhere), Error);
}

TEST_CASE("small grids are rejected") {
  const Grid2 g = Grid2::square(0, 1, 2);
  LiftGrid lift{g, GridField<Eigen::Vector3d>(g, Eigen::Vector3d(1, 0, 0)), GridField<Eigen::Vector3d>(g, Eigen::Vector3d(1, 0, 0))};
  CHECK_THROWS_AS(horizontality_residual(lift), Error);
  CHECK_THROWS_AS(dpsi_vs_omega_residual(lift), Error);
}
