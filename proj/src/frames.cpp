#include "parakahler/frames.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace parakahler {

bool GridN::interior(int k, int margin) const {
  const auto p = coords(k);
  for (int a = 0; a < n; ++a)
    if (p[a] < margin || p[a] >= dims[a] - margin) return false;
  return true;
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (double v : a)
    if (!(std::abs(v) <= m)) m = std::abs(v);
  return m;
}

namespace {

int stride(const GridN& g, int axis) {
  if (axis == 0) return 1;
  if (axis == 1) return g.dims[0];
  return g.dims[0] * g.dims[1];
}

// d/dy^axis of f at point k: central inside, second-order one-sided at the edges
template <typename F>
double partial(const GridN& g, int k, int axis, F&& f) {
  const int s = stride(g, axis);
  const int p = g.coords(k)[axis];
  const int m = g.dims[axis];
  const double h = g.h[axis];
  if (p == 0) return (-3.0 * f(k) + 4.0 * f(k + s) - f(k + 2 * s)) / (2.0 * h);
  if (p == m - 1) return (3.0 * f(k) - 4.0 * f(k - s) + f(k - 2 * s)) / (2.0 * h);
  return (f(k + s) - f(k - s)) / (2.0 * h);
}

void require_grid(const ImmersionDataN& d, const char* what) {
  if (d.n < 2 || d.n > 3) throw Error(std::string(what) + ": n must be 2 or 3");
  if (d.grid.n != d.n) throw Error(std::string(what) + ": grid dimension differs from n");
  if (static_cast<int>(d.pts.size()) != d.grid.size()) throw Error(std::string(what) + ": point count differs from grid");
  for (int a = 0; a < d.n; ++a)
    if (d.grid.dims[a] < 3) throw Error(std::string(what) + ": need at least 3 points per axis");
}

template <typename F>
TensorField per_point(const ImmersionDataN& d, F&& f) {
  TensorField out(d.pts.size());
  detail::parallel_for(static_cast<int>(d.pts.size()), [&](int k) { out[static_cast<size_t>(k)] = f(k); });
  return out;
}

Tensor cubic_at(const ImmersionDataN& d, int k) {
  const int n = d.n;
  const PointGeometry& P = d.pts[static_cast<size_t>(k)];
  Tensor C(n, 3);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double v = partial(d.grid, k, c, [&](int q) { return d.pts[static_cast<size_t>(q)].h(a, b); });
        for (int l = 0; l < n; ++l) v -= P.gamma[l](c, a) * P.h(l, b) + P.gamma[l](c, b) * P.h(a, l);
        C(a, b, c) = v;
      }
  return C;
}

Tensor difference_at(const ImmersionDataN& d, int k, const Tensor& C) {
  const int n = d.n;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(d.pts[static_cast<size_t>(k)].h);
  Tensor K(n, 3);
  for (int m = 0; m < n; ++m)
    for (int v = 0; v < n; ++v) {
      Eigen::VectorXd rhs(n);
      for (int b = 0; b < n; ++b) rhs(b) = C(b, v, m);
      const Eigen::VectorXd sol = lu.solve(rhs);
      for (int l = 0; l < n; ++l) K(l, m, v) = sol(l);
    }
  return K;
}

Tensor riemann_at(const ImmersionDataN& d, int k) {
  const int n = d.n;
  const PointGeometry& P = d.pts[static_cast<size_t>(k)];
  Tensor R(n, 4);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int dd = 0; dd < n; ++dd)
        for (int a = 0; a < n; ++a) {
          double v = partial(d.grid, k, dd, [&](int q) { return d.pts[static_cast<size_t>(q)].gamma[b](a, c); }) -
                     partial(d.grid, k, a, [&](int q) { return d.pts[static_cast<size_t>(q)].gamma[b](dd, c); });
          for (int e = 0; e < n; ++e) v += P.gamma[b](dd, e) * P.gamma[e](a, c) - P.gamma[b](a, e) * P.gamma[e](dd, c);
          R(b, c, dd, a) = v;
        }
  return R;
}

Tensor ricci_from(const Tensor& R) {
  const int n = R.n;
  Tensor ric(n, 2);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int dd = 0; dd < n; ++dd) ric(c, a) += R(dd, c, dd, a);
  return ric;
}

Eigen::MatrixXd sym_inverse(const Eigen::MatrixXd& h) { return (0.5 * (h + h.transpose())).inverse(); }

}  // namespace

void ImmersionDataN::validate(double det_tol, double sym_tol) const {
  require_grid(*this, "ImmersionDataN");
  for (const PointGeometry& P : pts) {
    if (P.h.rows() != n || P.h.cols() != n || P.psi.size() != n || static_cast<int>(P.gamma.size()) != n)
      throw Error("ImmersionDataN: tensor shapes do not match n");
    if (!P.h.allFinite() || !P.psi.allFinite()) throw Error("ImmersionDataN: non-finite entries");
    if (!(std::abs(P.h.determinant()) > det_tol)) throw Error("ImmersionDataN: h is singular");
    for (const Eigen::MatrixXd& G : P.gamma) {
      if (G.rows() != n || G.cols() != n) throw Error("ImmersionDataN: tensor shapes do not match n");
      if (!G.allFinite()) throw Error("ImmersionDataN: non-finite entries");
      if ((G - G.transpose()).cwiseAbs().maxCoeff() > sym_tol) throw Error("ImmersionDataN: connection has torsion");
    }
  }
}

MaurerCartanN build_U(const ImmersionDataN& data) {
  data.validate();
  const int n = data.n;
  const TensorField K = difference_tensor(data);
  MaurerCartanN mc;
  mc.U.resize(data.pts.size());
  mc.Ustar.resize(data.pts.size());
  for (size_t k = 0; k < data.pts.size(); ++k) {
    const PointGeometry& P = data.pts[k];
    for (int a = 0; a < n; ++a) {
      Eigen::MatrixXd U = Eigen::MatrixXd::Zero(n + 1, n + 1);
      Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n + 1, n + 1);
      U(0, 0) = P.psi(a);
      S(0, 0) = -P.psi(a);
      U(a + 1, 0) = 1.0;
      S(a + 1, 0) = 1.0;
      for (int c = 0; c < n; ++c) {
        U(0, c + 1) = -P.h(c, a);
        S(0, c + 1) = -P.h(a, c);
      }
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          const double id = b == c ? 1.0 : 0.0;
          U(b + 1, c + 1) = P.gamma[b](a, c) + P.psi(a) * id;
          S(b + 1, c + 1) = P.gamma[b](a, c) + K[k](b, a, c) - P.psi(a) * id;
        }
      mc.U[k].push_back(U);
      mc.Ustar[k].push_back(S);
    }
  }
  return mc;
}

TensorField riemann(const ImmersionDataN& data) {
  data.validate();
  return per_point(data, [&](int k) { return riemann_at(data, k); });
}

TensorField ricci(const ImmersionDataN& data) {
  data.validate();
  return per_point(data, [&](int k) { return ricci_from(riemann_at(data, k)); });
}

Tensor h_from_ricci(const Tensor& ric) {
  const int n = ric.n;
  if (n < 2 || ric.rank != 2) throw Error("h_from_ricci: need a rank-2 tensor with n >= 2");
  Tensor h(n, 2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) h(a, b) = (n * ric(a, b) + ric(b, a)) / (n * n - 1.0);
  return h;
}

TensorField weyl(const ImmersionDataN& data) {
  data.validate();
  const int n = data.n;
  return per_point(data, [&](int k) {
    const Tensor R = riemann_at(data, k);
    const Tensor ric = ricci_from(R);
    Tensor W = R;
    const double f = 1.0 / (n * n - 1.0);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int dd = 0; dd < n; ++dd)
          for (int a = 0; a < n; ++a) {
            double v = 0.0;
            if (b == a) v += n * ric(c, dd) + ric(dd, c);
            if (b == dd) v -= n * ric(c, a) + ric(a, c);
            if (b == c) v += (n - 1) * (ric(a, dd) - ric(dd, a));
            W(b, c, dd, a) += f * v;
          }
    return W;
  });
}

TensorField cubic_form(const ImmersionDataN& data) {
  data.validate();
  return per_point(data, [&](int k) { return cubic_at(data, k); });
}

TensorField difference_tensor(const ImmersionDataN& data) {
  data.validate();
  return per_point(data, [&](int k) { return difference_at(data, k, cubic_at(data, k)); });
}

TensorField tchebycheff(const ImmersionDataN& data) {
  data.validate();
  const int n = data.n;
  return per_point(data, [&](int k) {
    const Tensor C = cubic_at(data, k);
    const Eigen::MatrixXd gi = sym_inverse(data.pts[static_cast<size_t>(k)].h);
    Tensor T(n, 1);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) T(a) += 0.5 * C(a, b, c) * gi(b, c);
    return T;
  });
}

CompatibilityResiduals compatibility_residuals(const ImmersionDataN& data) {
  data.validate();
  const int n = data.n;
  const GridN& g = data.grid;
  CompatibilityResiduals out;
  const size_t N = data.pts.size();
  out.r1.assign(N, 0.0);
  out.r2.assign(N, 0.0);
  out.r3.assign(N, 0.0);
  detail::parallel_for(static_cast<int>(N), [&](int k) {
    if (!g.interior(k)) return;
    const PointGeometry& P = data.pts[static_cast<size_t>(k)];
    auto hq = [&](int a, int b) { return [&, a, b](int q) { return data.pts[static_cast<size_t>(q)].h(a, b); }; };
    double m1 = 0, m2 = 0, m3 = 0;
    for (int dd = 0; dd < n; ++dd)
      for (int a = 0; a < n; ++a) {
        const double v = partial(g, k, dd, [&](int q) { return data.pts[static_cast<size_t>(q)].psi(a); }) -
                         partial(g, k, a, [&](int q) { return data.pts[static_cast<size_t>(q)].psi(dd); }) -
                         (P.h(a, dd) - P.h(dd, a));
        m1 = std::max(m1, std::abs(v));
      }
    // nabla_d h_{c a} - nabla_a h_{c d}; the symmetric Gamma terms on the last slot cancel
    for (int c = 0; c < n; ++c)
      for (int dd = 0; dd < n; ++dd)
        for (int a = 0; a < n; ++a) {
          double v = partial(g, k, dd, hq(c, a)) - partial(g, k, a, hq(c, dd));
          for (int l = 0; l < n; ++l) v += P.gamma[l](a, c) * P.h(l, dd) - P.gamma[l](dd, c) * P.h(l, a);
          m2 = std::max(m2, std::abs(v));
        }
    const Tensor R = riemann_at(data, k);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int dd = 0; dd < n; ++dd)
          for (int a = 0; a < n; ++a) {
            double v = R(b, c, dd, a);
            if (b == dd) v -= P.h(c, a);
            if (b == a) v += P.h(c, dd);
            if (b == c) v -= P.h(dd, a) - P.h(a, dd);
            m3 = std::max(m3, std::abs(v));
          }
    out.r1[static_cast<size_t>(k)] = m1;
    out.r2[static_cast<size_t>(k)] = m2;
    out.r3[static_cast<size_t>(k)] = m3;
  });
  out.max_r1 = interior_max(g, out.r1);
  out.max_r2 = interior_max(g, out.r2);
  out.max_r3 = interior_max(g, out.r3);
  return out;
}

double max_weyl(const ImmersionDataN& data) {
  const TensorField W = weyl(data);
  std::vector<double> f(W.size());
  for (size_t k = 0; k < W.size(); ++k) f[k] = W[k].max_abs();
  return interior_max(data.grid, f);
}

double trace_cubic_max(const ImmersionDataN& data) {
  const TensorField T = tchebycheff(data);
  std::vector<double> f(T.size());
  for (size_t k = 0; k < T.size(); ++k) f[k] = 2.0 * T[k].max_abs();
  return interior_max(data.grid, f);
}

bool is_minimal(const ImmersionDataN& data, double tol) { return trace_cubic_max(data) < tol; }

bool is_totally_geodesic(const ImmersionDataN& data, double tol) {
  const TensorField C = cubic_form(data);
  std::vector<double> f(C.size());
  for (size_t k = 0; k < C.size(); ++k) f[k] = C[k].max_abs();
  return interior_max(data.grid, f) < tol;
}

double interior_max(const GridN& g, const std::vector<double>& f, int margin) {
  double m = 0.0;
  for (int k = 0; k < g.size(); ++k)
    if (g.interior(k, margin) && !(f[static_cast<size_t>(k)] <= m)) m = f[static_cast<size_t>(k)];
  return m;
}

}  // namespace parakahler
