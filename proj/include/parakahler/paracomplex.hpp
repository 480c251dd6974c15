#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "parakahler/grid.hpp"

namespace parakahler {

// Para-complex (split-complex) number re + i' im with i'^2 = +1.
template <typename T>
struct ParaComplex {
  T re{};
  T im{};

  constexpr ParaComplex() = default;
  constexpr ParaComplex(T r, T i = T(0)) : re(r), im(i) {}

  friend constexpr ParaComplex operator+(ParaComplex a, ParaComplex b) { return {a.re + b.re, a.im + b.im}; }
  friend constexpr ParaComplex operator-(ParaComplex a, ParaComplex b) { return {a.re - b.re, a.im - b.im}; }
  friend constexpr ParaComplex operator-(ParaComplex a) { return {-a.re, -a.im}; }
  friend constexpr ParaComplex operator*(ParaComplex a, ParaComplex b) {
    return {a.re * b.re + a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend constexpr ParaComplex operator*(T s, ParaComplex a) { return {s * a.re, s * a.im}; }
  friend constexpr ParaComplex operator*(ParaComplex a, T s) { return {s * a.re, s * a.im}; }
  friend constexpr bool operator==(ParaComplex a, ParaComplex b) { return a.re == b.re && a.im == b.im; }
  ParaComplex& operator+=(ParaComplex b) { return *this = *this + b; }
};

using pcd = ParaComplex<double>;

template <typename T>
constexpr ParaComplex<T> conj(ParaComplex<T> z) {
  return {z.re, -z.im};
}

// z z* = re^2 - im^2, real and possibly zero or negative
template <typename T>
constexpr T norm2(ParaComplex<T> z) {
  return z.re * z.re - z.im * z.im;
}

// Zero divisors (z z* = 0) have no inverse.
template <typename T>
std::optional<ParaComplex<T>> inverse(ParaComplex<T> z, T tol = T(0)) {
  const T n = norm2(z);
  if (std::abs(n) <= tol) return std::nullopt;
  return conj(z) * (T(1) / n);
}

template <typename T>
std::optional<ParaComplex<T>> divide(ParaComplex<T> a, ParaComplex<T> b, T tol = T(0)) {
  auto inv = inverse(b, tol);
  if (!inv) return std::nullopt;
  return a * *inv;
}

template <typename T>
ParaComplex<T> exp_ip(T t) {
  return {std::cosh(t), std::sinh(t)};
}

template <typename T>
using Vec3 = Eigen::Matrix<T, 3, 1>;

// Vector in D^3 stored as real and i' parts.
template <typename T>
struct ParaVector3 {
  Vec3<T> re = Vec3<T>::Zero();
  Vec3<T> im = Vec3<T>::Zero();

  ParaComplex<T> operator[](int k) const { return {re(k), im(k)}; }
};

// <u, v>_h = sum conj(u_k) v_k
template <typename T>
ParaComplex<T> hermitian(const ParaVector3<T>& u, const ParaVector3<T>& v) {
  return {u.re.dot(v.re) - u.im.dot(v.im), u.re.dot(v.im) - u.im.dot(v.re)};
}

// u*^T P v with P = [[0,1,0],[1,0,0],[0,0,-H]]
template <typename T>
ParaComplex<T> twisted_hermitian(const ParaVector3<T>& u, const ParaVector3<T>& v, int H) {
  auto P = [H](const Vec3<T>& w) { return Vec3<T>(w(1), w(0), -H * w(2)); };
  ParaVector3<T> pv{P(v.re), P(v.im)};
  return hermitian(u, pv);
}

// z = (x + chi)/2 + i'(x - chi)/2
template <typename T>
ParaVector3<T> real_pair_to_pc(const Vec3<T>& x, const Vec3<T>& chi) {
  return {T(0.5) * (x + chi), T(0.5) * (x - chi)};
}

template <typename T>
std::pair<Vec3<T>, Vec3<T>> pc_to_real_pair(const ParaVector3<T>& z) {
  return {z.re + z.im, z.re - z.im};
}

// Point (x, chi) of the quadric <x, chi> = 1 and tangent vectors (X, Xt) there.
template <typename T>
struct CMPoint {
  Vec3<T> x;
  Vec3<T> chi;
};

template <typename T>
struct CMTangent {
  Vec3<T> X = Vec3<T>::Zero();
  Vec3<T> Xt = Vec3<T>::Zero();

  friend CMTangent operator+(const CMTangent& a, const CMTangent& b) { return {a.X + b.X, a.Xt + b.Xt}; }
  friend CMTangent operator*(T s, const CMTangent& a) { return {s * a.X, s * a.Xt}; }
};

template <typename T>
struct TangentSplit {
  CMTangent<T> hplus;
  CMTangent<T> vert;
  CMTangent<T> hminus;
};

template <typename T>
void require_on_quadric(const CMPoint<T>& p, T tol = T(1e-10)) {
  const T s = p.x.dot(p.chi);
  if (!(std::abs(s - T(1)) <= tol)) throw Error("point is off the quadric <x,chi> = 1");
}

template <typename T>
void require_tangent(const CMPoint<T>& p, const CMTangent<T>& v, T tol = T(1e-10)) {
  const T r = v.X.dot(p.chi) + p.x.dot(v.Xt);
  const T scale = T(1) + v.X.norm() * p.chi.norm() + p.x.norm() * v.Xt.norm();
  if (!(std::abs(r) <= tol * scale)) throw Error("vector is not tangent to the quadric");
}

// Split into the horizontal (+), vertical and horizontal (-) parts.
template <typename T>
TangentSplit<T> decompose_tangent(const CMPoint<T>& p, const CMTangent<T>& v) {
  require_on_quadric(p);
  require_tangent(p, v);
  const T a = v.X.dot(p.chi);
  const T b = p.x.dot(v.Xt);
  TangentSplit<T> s;
  s.hplus = {v.X - a * p.x, Vec3<T>::Zero()};
  s.vert = {a * p.x, -a * p.chi};
  s.hminus = {Vec3<T>::Zero(), v.Xt - b * p.chi};
  return s;
}

template <typename T>
T g_hat(const CMTangent<T>& v, const CMTangent<T>& w) {
  return T(0.5) * (v.X.dot(w.Xt) + w.X.dot(v.Xt));
}

template <typename T>
T omega_hat(const CMTangent<T>& v, const CMTangent<T>& w) {
  return T(0.5) * (v.X.dot(w.Xt) - w.X.dot(v.Xt));
}

// Para-complex structure (X, Xt) -> (X, -Xt)
template <typename T>
CMTangent<T> para_structure(const CMTangent<T>& v) {
  return {v.X, -v.Xt};
}

// Contact form zeta_p(v) = Im <z_p, z_v>_h
template <typename T>
T contact_form(const CMPoint<T>& p, const CMTangent<T>& v) {
  return hermitian(real_pair_to_pc(p.x, p.chi), real_pair_to_pc(v.X, v.Xt)).im;
}

// d zeta(v, w) for constant vector fields v, w on R^3 x R_3: D_v zeta(w) - D_w zeta(v).
// zeta is linear in the base point, so the directional derivative is zeta evaluated with the
// base replaced by the direction.
template <typename T>
T contact_differential(const CMTangent<T>& v, const CMTangent<T>& w) {
  const CMPoint<T> pv{v.X, v.Xt};
  const CMPoint<T> pw{w.X, w.Xt};
  return contact_form(pv, w) - contact_form(pw, v);
}

template <typename T>
CMPoint<T> act(const Eigen::Matrix<T, 3, 3>& g, const CMPoint<T>& p) {
  return {g * p.x, g.transpose().inverse() * p.chi};
}

template <typename T>
CMTangent<T> act(const Eigen::Matrix<T, 3, 3>& g, const CMTangent<T>& v) {
  return {g * v.X, g.transpose().inverse() * v.Xt};
}

// Representative with |x| = |chi| (Euclidean norms) in the scaling orbit (alpha x, chi / alpha).
template <typename T>
CMPoint<T> s2n_normalize(const CMPoint<T>& p) {
  const T nx = p.x.norm();
  const T nc = p.chi.norm();
  if (!(nx > T(0)) || !(nc > T(0))) throw Error("s2n_normalize: zero vector");
  const T alpha = std::sqrt(nc / nx);
  return {alpha * p.x, p.chi / alpha};
}

// Gridded lift y -> (x(y), chi(y)) over a 2-dimensional parameter grid.
struct LiftGrid {
  Grid2 grid;
  GridField<Eigen::Vector3d> x;
  GridField<Eigen::Vector3d> chi;
};

struct PsiFields {
  RealField psi1;
  RealField psi2;
};

// psi_a = <d_a x, chi>
PsiFields psi_fields(const LiftGrid& lift);
LiftGrid scale_lift(const LiftGrid& lift, const RealField& alpha);
LiftGrid s2n_normalize(const LiftGrid& lift);
double horizontality_residual(const LiftGrid& lift);
// max over cell centres of |d psi + 2 omega_hat| on the pulled-back coordinate tangents
double dpsi_vs_omega_residual(const LiftGrid& lift);

}  // namespace parakahler
