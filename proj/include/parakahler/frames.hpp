#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "parakahler/grid.hpp"

namespace parakahler {

// Uniform lattice in R^n, n in {2, 3}. Axis 0 varies fastest.
struct GridN {
  int n = 2;
  std::array<int, 3> dims{1, 1, 1};
  std::array<double, 3> origin{0, 0, 0};
  std::array<double, 3> h{1, 1, 1};

  int size() const { return dims[0] * dims[1] * dims[2]; }
  int index(const std::array<int, 3>& p) const { return (p[2] * dims[1] + p[1]) * dims[0] + p[0]; }
  std::array<int, 3> coords(int k) const { return {k % dims[0], (k / dims[0]) % dims[1], k / (dims[0] * dims[1])}; }
  bool interior(int k, int margin = 1) const;

  static GridN from_grid2(const Grid2& g) { return {2, {g.nx, g.ny, 1}, {g.x0, g.y0, 0}, {g.hx, g.hy, 1}}; }
};

// Dense tensor with n^rank real entries; index order as written, first index slowest.
struct Tensor {
  int n = 0;
  int rank = 0;
  std::vector<double> a;

  Tensor() = default;
  Tensor(int n_, int rank_) : n(n_), rank(rank_), a(static_cast<size_t>(ipow(n_, rank_)), 0.0) {}

  double& operator()(int i, int j = 0, int k = 0, int l = 0) { return a[offset(i, j, k, l)]; }
  double operator()(int i, int j = 0, int k = 0, int l = 0) const { return a[offset(i, j, k, l)]; }
  double max_abs() const;

 private:
  static int ipow(int b, int e) {
    int r = 1;
    for (int k = 0; k < e; ++k) r *= b;
    return r;
  }
  size_t offset(int i, int j, int k, int l) const {
    int o = i;
    if (rank > 1) o = o * n + j;
    if (rank > 2) o = o * n + k;
    if (rank > 3) o = o * n + l;
    return static_cast<size_t>(o);
  }
};

using TensorField = std::vector<Tensor>;

// Per-point geometry: h(a, b) = h_ab, gamma[b](a, c) = nabla^b_{ac} (derivative direction a), psi(a).
struct PointGeometry {
  Eigen::MatrixXd h;
  std::vector<Eigen::MatrixXd> gamma;
  Eigen::VectorXd psi;
};

struct ImmersionDataN {
  int n = 2;
  GridN grid;
  std::vector<PointGeometry> pts;

  // throws on shape mismatch, |det h| <= det_tol or torsion above sym_tol
  void validate(double det_tol = 1e-10, double sym_tol = 1e-10) const;
};

// U[point][alpha], Ustar likewise; (n+1) x (n+1) with index 0 for the position column.
struct MaurerCartanN {
  std::vector<std::vector<Eigen::MatrixXd>> U;
  std::vector<std::vector<Eigen::MatrixXd>> Ustar;
};

// Entries read straight off (gamma, h, psi); Ustar additionally needs K, hence the derivatives of h.
MaurerCartanN build_U(const ImmersionDataN& data);

// R(b, c, d, a) = R^b_{c d a}
TensorField riemann(const ImmersionDataN& data);
// R(c, a) = R^d_{c d a}
TensorField ricci(const ImmersionDataN& data);
Tensor h_from_ricci(const Tensor& ric);
TensorField weyl(const ImmersionDataN& data);

// C(a, b, c) = (nabla_c h)(a, b): the derivative sits in the last slot.
TensorField cubic_form(const ImmersionDataN& data);
// K(l, m, v) = K^l_{mv}, solved from h_{b l} K^l_{m v} = C_{b v m}
TensorField difference_tensor(const ImmersionDataN& data);
// T(a) = C(a, b, c) g^{bc} / 2 with g the symmetric part of h
TensorField tchebycheff(const ImmersionDataN& data);

struct CompatibilityResiduals {
  // per-point max-abs over free indices; zero on boundary points
  std::vector<double> r1, r2, r3;
  double max_r1 = 0, max_r2 = 0, max_r3 = 0;
};

CompatibilityResiduals compatibility_residuals(const ImmersionDataN& data);
double max_weyl(const ImmersionDataN& data);
// max over interior of |C(a, b, c) g^{bc}|
double trace_cubic_max(const ImmersionDataN& data);
bool is_minimal(const ImmersionDataN& data, double tol);
bool is_totally_geodesic(const ImmersionDataN& data, double tol);

// Interior max of a per-point scalar field (boundary excluded).
double interior_max(const GridN& g, const std::vector<double>& f, int margin = 1);

}  // namespace parakahler
