#include "parakahler/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "parallel.hpp"

namespace parakahler {

namespace {

struct Stepper {
  const MCPair& mc;

  // Uz dz + Uzb dzbar at node (i, j)
  Mat3cd incr(int i, int j, cd dz) const { return mc.Uz(i, j) * dz + mc.Uzb(i, j) * std::conj(dz); }

  // increment at fraction t of the segment a -> b: cubic interpolation through the outer
  // neighbours where both exist, quadratic next to an edge
  Mat3cd at(int ia, int ja, int di, int dj, double t, cd dz) const {
    auto inside = [&](int i, int j) { return i >= 0 && j >= 0 && i < mc.grid.nx && j < mc.grid.ny; };
    const bool prev = inside(ia - di, ja - dj);
    const bool next = inside(ia + 2 * di, ja + 2 * dj);
    const Mat3cd a = incr(ia, ja, dz), b = incr(ia + di, ja + dj, dz);
    if (prev && next) {
      const Mat3cd m = incr(ia - di, ja - dj, dz), p = incr(ia + 2 * di, ja + 2 * dj, dz);
      return -t * (t - 1) * (t - 2) / 6 * m + (t + 1) * (t - 1) * (t - 2) / 2 * a - (t + 1) * t * (t - 2) / 2 * b +
             (t + 1) * t * (t - 1) / 6 * p;
    }
    if (prev) {
      const Mat3cd m = incr(ia - di, ja - dj, dz);
      return t * (t - 1) / 2 * m - (t + 1) * (t - 1) * a + (t + 1) * t / 2 * b;
    }
    if (next) {
      const Mat3cd p = incr(ia + 2 * di, ja + 2 * dj, dz);
      return (t - 1) * (t - 2) / 2 * a - t * (t - 2) * b + t * (t - 1) / 2 * p;
    }
    return (1 - t) * a + t * b;
  }

  // one exponential step from node a to node b (two-point Gauss Magnus: midpoint sum plus one
  // commutator); the trace part goes to the scalar factor
  void step(int ia, int ja, int ib, int jb, cd dz, GridField<Mat3cd>& F0, ComplexField& s) const {
    const int di = ib - ia, dj = jb - ja;
    const double r = std::sqrt(3.0) / 6.0;
    const Mat3cd A1 = at(ia, ja, di, dj, 0.5 - r, dz), A2 = at(ia, ja, di, dj, 0.5 + r, dz);
    // F' = F A, so the commutator enters as [A1, A2]
    const Mat3cd M = 0.5 * (A1 + A2) + (std::sqrt(3.0) / 12.0) * (A1 * A2 - A2 * A1);
    const cd t = M.trace() / 3.0;
    F0(ib, jb) = F0(ia, ja) * expm(M - t * Mat3cd::Identity());
    s(ib, jb) = s(ia, ja) + t;
  }
};

double sum_abs_max(const GridField<Mat3cd>& a, const GridField<Mat3cd>& b) {
  double m = 0.0;
  for (size_t k = 0; k < a.v.size(); ++k) m = std::max(m, (a.v[k] - b.v[k]).cwiseAbs().maxCoeff());
  return m;
}

cd pair(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b) { return a.cwiseProduct(b).sum(); }

// L^-1 = R_H / sqrt(H) maps the integrated frame's columns to real ambient coordinates
Mat3cd ambient_map(Signature s) { return R_H<double>(s) / sqrt_H<double>(s); }

}  // namespace

FrameField integrate_frame(const MCPair& mc, const Mat3cd& Finit, PathMode mode) {
  const Grid2& g = mc.grid;
  if (mc.Uz.v.size() != static_cast<size_t>(g.size()) || mc.Uzb.v.size() != static_cast<size_t>(g.size()))
    throw Error("integrate_frame: Maurer-Cartan fields do not match the grid");
  for (size_t k = 0; k < mc.Uz.v.size(); ++k)
    if (!mc.Uz.v[k].allFinite() || !mc.Uzb.v[k].allFinite()) throw Error("integrate_frame: non-finite Maurer-Cartan data");
  const cd det0 = Finit.determinant();
  if (!(std::abs(det0) > 1e-14) || !Finit.allFinite()) throw Error("integrate_frame: singular initial frame");

  FrameField out;
  out.grid = g;
  out.sig = mc.sig;
  out.Finit = Finit;
  out.F0 = GridField<Mat3cd>(g, Mat3cd::Zero());
  out.logscale = ComplexField(g, 0.0);
  // base at the centre node: the defect of a discretely non-flat form piles up along the path,
  // so this halves the longest path compared with a corner base
  const int bi = g.nx / 2, bj = g.ny / 2;
  out.base_i = bi;
  out.base_j = bj;
  out.F0(bi, bj) = Finit;
  const Stepper st{mc};
  const cd dx = g.hx;
  const cd dy = I1 * g.hy;

  // exceptions cannot cross the parallel region, so collect the first one
  std::vector<std::string> errors(static_cast<size_t>(std::max(g.nx, g.ny)));
  if (mode == PathMode::row_major) {
    for (int j = bj + 1; j < g.ny; ++j) st.step(bi, j - 1, bi, j, dy, out.F0, out.logscale);
    for (int j = bj - 1; j >= 0; --j) st.step(bi, j + 1, bi, j, -dy, out.F0, out.logscale);
    detail::parallel_for(g.ny, [&](int j) {
      try {
        for (int i = bi + 1; i < g.nx; ++i) st.step(i - 1, j, i, j, dx, out.F0, out.logscale);
        for (int i = bi - 1; i >= 0; --i) st.step(i + 1, j, i, j, -dx, out.F0, out.logscale);
      } catch (const std::exception& e) {
        errors[static_cast<size_t>(j)] = e.what();
      }
    });
  } else {
    for (int i = bi + 1; i < g.nx; ++i) st.step(i - 1, bj, i, bj, dx, out.F0, out.logscale);
    for (int i = bi - 1; i >= 0; --i) st.step(i + 1, bj, i, bj, -dx, out.F0, out.logscale);
    detail::parallel_for(g.nx, [&](int i) {
      try {
        for (int j = bj + 1; j < g.ny; ++j) st.step(i, j - 1, i, j, dy, out.F0, out.logscale);
        for (int j = bj - 1; j >= 0; --j) st.step(i, j + 1, i, j, -dy, out.F0, out.logscale);
      } catch (const std::exception& e) {
        errors[static_cast<size_t>(i)] = e.what();
      }
    });
  }
  for (const std::string& e : errors)
    if (!e.empty()) throw Error("integrate_frame: " + e);

  out.F = out.F0;
  for (size_t k = 0; k < out.F.v.size(); ++k) {
    out.F.v[k] *= std::exp(out.logscale.v[k]);
    if (!out.F.v[k].allFinite()) throw Error("integrate_frame: frame overflow");
  }
  return out;
}

RealField flatness_residual(const MCPair& mc) { return zero_curvature_field(mc); }

double path_disagreement(const MCPair& mc, const Mat3cd& Finit) {
  const FrameField a = integrate_frame(mc, Finit, PathMode::row_major);
  const FrameField b = integrate_frame(mc, Finit, PathMode::column_major);
  return sum_abs_max(a.F, b.F);
}

LiftField extract_lift(const FrameField& frame, const SurfaceData& data, double imag_tol) {
  data.validate();
  const Grid2& g = frame.grid;
  if (data.grid.nx != g.nx || data.grid.ny != g.ny) throw Error("extract_lift: surface data grid differs from frame grid");
  const Signature s = frame.sig;
  const double H = s.H;
  const Mat3cd Linv = ambient_map(s);
  const Mat3cd Lt = Linv.inverse().transpose();

  LiftField lift;
  lift.grid = g;
  lift.sig = s;
  lift.x = lift.chi = GridField<Eigen::Vector3d>(g, Eigen::Vector3d::Zero());
  lift.xi = lift.eta = GridField<Eigen::Vector3cd>(g, Eigen::Vector3cd::Zero());
  double worst = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const cd c = c_from_theta(data.theta(i, j), data.theta_guard);
      const double eu = std::exp(data.u(i, j));
      const Mat3cd D = gauge_D(data.u(i, j), c, s);
      const Mat3cd Ft = frame.F(i, j) * D.inverse();
      Mat3cd Dt = Mat3cd::Zero();
      Dt(0, 0) = H * c * eu;
      Dt(1, 1) = H * std::conj(c) * eu;
      Dt(2, 2) = 1.0;
      const Mat3cd Fs = Ft.inverse().transpose() * Dt;
      const Eigen::Vector3cd x = Linv * Ft.col(2);
      const Eigen::Vector3cd chi = Lt * Fs.col(2);
      worst = std::max({worst, x.imag().cwiseAbs().maxCoeff() / std::max(1.0, x.norm()),
                        chi.imag().cwiseAbs().maxCoeff() / std::max(1.0, chi.norm())});
      lift.x(i, j) = x.real();
      lift.chi(i, j) = chi.real();
      lift.xi(i, j) = Linv * Ft.col(0);
      lift.eta(i, j) = Lt * Fs.col(1);
    }
  if (!(worst <= imag_tol)) throw Error("extract_lift: lift has an imaginary part above tolerance");
  return lift;
}

LiftInvariants lift_invariants(const LiftField& lift, const SurfaceData& data) {
  LiftInvariants r;
  const double H = lift.sig.H;
  for (int j = 0; j < lift.grid.ny; ++j)
    for (int i = 0; i < lift.grid.nx; ++i) {
      const Eigen::Vector3cd x = lift.x(i, j).cast<cd>(), chi = lift.chi(i, j).cast<cd>();
      const Eigen::Vector3cd& xi = lift.xi(i, j);
      const Eigen::Vector3cd& eta = lift.eta(i, j);
      const cd want = H * std::exp(data.u(i, j)) * c_from_theta(data.theta(i, j), data.theta_guard);
      r.pairing = std::max(r.pairing, std::abs(lift.x(i, j).dot(lift.chi(i, j)) - 1.0));
      r.xi_chi = std::max(r.xi_chi, std::abs(pair(xi, chi)));
      r.x_eta = std::max(r.x_eta, std::abs(pair(x, eta)));
      r.xi_eta = std::max(r.xi_eta, std::abs(pair(xi, eta)));
      r.xi_etabar = std::max(r.xi_etabar, std::abs(pair(xi, eta.conjugate()) - want));
    }
  return r;
}

double RoundTripReport::max() const { return std::max({err_u, err_theta, err_phi, err_Q, err_rho}); }

RoundTripReport round_trip(const LiftField& lift, const SurfaceData& ref, int margin) {
  const Grid2& g = lift.grid;
  g.require_min(2 * margin + 1, "round_trip");
  if (ref.grid.nx != g.nx || ref.grid.ny != g.ny) throw Error("round_trip: reference grid differs from lift grid");
  const double H = lift.sig.H;
  RoundTripReport rep;
  rep.margin = margin;
  SurfaceData& d = rep.recovered;
  d = SurfaceData::zeros(lift.sig, g);
  d.theta_guard = ref.theta_guard;
  GridField<Eigen::Vector3d> xs = lift.x;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const cd w = pair(lift.xi(i, j), lift.eta(i, j).conjugate());
      const double re = H * w.real();
      if (!(re > 0.0) || !std::isfinite(re)) throw Error("round_trip: degenerate <xi, conj eta>");
      d.u(i, j) = std::log(re);
      const cd c = w / (H * re);
      d.theta(i, j) = theta_from_c(c);
    }
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Eigen::Vector3cd xi_x = fd::dx4(lift.xi, i, j), xi_y = fd::dy4(lift.xi, i, j);
      const Eigen::Vector3cd xi_z = 0.5 * (xi_x - I1 * xi_y);
      const Eigen::Vector3cd xi_zb = 0.5 * (xi_x + I1 * xi_y);
      const Eigen::Vector3d x_x = fd::dx4(lift.x, i, j), x_y = fd::dy4(lift.x, i, j);
      d.Q(i, j) = pair(xi_z, lift.eta(i, j));
      d.phi(i, j) = H * std::exp(-d.u(i, j)) * pair(xi_zb, lift.eta(i, j));
      d.rho(i, j) = 0.5 * cd(x_x.dot(lift.chi(i, j)), -x_y.dot(lift.chi(i, j)));
    }
  auto err = [&](auto&& f) { return detail::interior_max(g, margin, [&](int i, int j) { return std::abs(f(i, j)); }); };
  rep.err_u = err([&](int i, int j) { return d.u(i, j) - ref.u(i, j); });
  rep.err_theta = err([&](int i, int j) { return d.theta(i, j) - ref.theta(i, j); });
  rep.err_phi = err([&](int i, int j) { return d.phi(i, j) - ref.phi(i, j); });
  rep.err_Q = err([&](int i, int j) { return d.Q(i, j) - ref.Q(i, j); });
  rep.err_rho = err([&](int i, int j) { return d.rho(i, j) - ref.rho(i, j); });
  return rep;
}

namespace {

struct Horizontal {
  std::array<Eigen::Vector3d, 2> xi, eta;
  std::array<double, 2> psi;
};

Horizontal horizontal_at(const LiftField& lift, int i, int j) {
  Horizontal h;
  const std::array<Eigen::Vector3d, 2> dx = {fd::dx4(lift.x, i, j), fd::dy4(lift.x, i, j)};
  const std::array<Eigen::Vector3d, 2> dc = {fd::dx4(lift.chi, i, j), fd::dy4(lift.chi, i, j)};
  const Eigen::Vector3d& x = lift.x(i, j);
  const Eigen::Vector3d& chi = lift.chi(i, j);
  for (int a = 0; a < 2; ++a) {
    h.psi[a] = dx[a].dot(chi);
    h.xi[a] = dx[a] - h.psi[a] * x;
    h.eta[a] = dc[a] + h.psi[a] * chi;
  }
  return h;
}

// fourth-order derivative of the horizontal forms along axis `axis`
std::pair<std::array<Eigen::Vector3d, 2>, std::array<Eigen::Vector3d, 2>> horizontal_derivative(const LiftField& lift, int i,
                                                                                                   int j, int axis) {
  const Grid2& g = lift.grid;
  const int n = axis == 0 ? g.nx : g.ny;
  const int p = axis == 0 ? i : j;
  const double h = axis == 0 ? g.hx : g.hy;
  auto at = [&](int off) { return axis == 0 ? horizontal_at(lift, i + off, j) : horizontal_at(lift, i, j + off); };
  std::array<Eigen::Vector3d, 2> dxi, deta;
  if (p >= 2 && p <= n - 3) {
    const Horizontal m2 = at(-2), m1 = at(-1), p1 = at(1), p2 = at(2);
    for (int a = 0; a < 2; ++a) {
      dxi[a] = (m2.xi[a] - 8.0 * m1.xi[a] + 8.0 * p1.xi[a] - p2.xi[a]) / (12.0 * h);
      deta[a] = (m2.eta[a] - 8.0 * m1.eta[a] + 8.0 * p1.eta[a] - p2.eta[a]) / (12.0 * h);
    }
  } else if (p >= 1 && p <= n - 2) {
    const Horizontal m1 = at(-1), p1 = at(1);
    for (int a = 0; a < 2; ++a) {
      dxi[a] = (p1.xi[a] - m1.xi[a]) / (2.0 * h);
      deta[a] = (p1.eta[a] - m1.eta[a]) / (2.0 * h);
    }
  } else {
    throw Error("lift_difference_tensor: node on the edge of the grid");
  }
  return {dxi, deta};
}

Eigen::Matrix2d h_matrix(const Horizontal& hz) {
  Eigen::Matrix2d h;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) h(a, b) = hz.xi[a].dot(hz.eta[b]);
  return h;
}

Eigen::Matrix2d pinv_sym(const Eigen::Matrix2d& G) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(G);
  const double scale = std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::Vector2d inv = Eigen::Vector2d::Zero();
  for (int k = 0; k < 2; ++k)
    if (std::abs(es.eigenvalues()(k)) > 1e-10 * scale) inv(k) = 1.0 / es.eigenvalues()(k);
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

CMTangent<double> second_fundamental(const Horizontal& hz, const Tensor& K, int X, int Y) {
  // Pi_- keeps the covector part: (0, sum K^l eta_l)
  CMTangent<double> W;
  for (int l = 0; l < 2; ++l) W.Xt += K(l, X, Y) * hz.eta[l];
  std::array<CMTangent<double>, 2> e = {CMTangent<double>{hz.xi[0], hz.eta[0]}, CMTangent<double>{hz.xi[1], hz.eta[1]}};
  Eigen::Matrix2d G;
  Eigen::Vector2d r;
  for (int a = 0; a < 2; ++a) {
    r(a) = g_hat(e[a], W);
    for (int b = 0; b < 2; ++b) G(a, b) = g_hat(e[a], e[b]);
  }
  const Eigen::Vector2d coef = pinv_sym(G) * r;
  CMTangent<double> N = W;
  for (int a = 0; a < 2; ++a) N = N + (-coef(a)) * e[a];
  return N;
}

double norm(const CMTangent<double>& v) { return std::sqrt(v.X.squaredNorm() + v.Xt.squaredNorm()); }

}  // namespace

Tensor lift_difference_tensor(const LiftField& lift, int i, int j) {
  lift.grid.require_min(5, "lift_difference_tensor");
  const Horizontal hz = horizontal_at(lift, i, j);
  const Eigen::Matrix2d h = h_matrix(hz);
  if (!(std::abs(h.determinant()) > 1e-12)) throw Error("lift_difference_tensor: degenerate tangent plane");
  const Eigen::Matrix2d hi = h.inverse();
  Tensor K(2, 3);
  for (int c = 0; c < 2; ++c) {
    const auto [dxi, deta] = horizontal_derivative(lift, i, j, c);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double v = a == b ? 2.0 * hz.psi[c] : 0.0;
        for (int e = 0; e < 2; ++e) v += hi(a, e) * hz.xi[e].dot(deta[b]) - hi(e, a) * dxi[b].dot(hz.eta[e]);
        K(a, b, c) = v;
      }
  }
  return K;
}

CMTangent<double> second_fundamental_form(const LiftField& lift, int i, int j, int X, int Y) {
  if (X < 0 || X > 1 || Y < 0 || Y > 1) throw Error("second_fundamental_form: direction index must be 0 or 1");
  return second_fundamental(horizontal_at(lift, i, j), lift_difference_tensor(lift, i, j), X, Y);
}

double mean_curvature_residual(const LiftField& lift) {
  lift.grid.require_min(5, "mean_curvature_residual");
  return detail::interior_max(lift.grid, 4, [&](int i, int j) {
    const Horizontal hz = horizontal_at(lift, i, j);
    const Tensor K = lift_difference_tensor(lift, i, j);
    const Eigen::Matrix2d h = h_matrix(hz);
    const Eigen::Matrix2d gi = (0.5 * (h + h.transpose())).inverse();
    CMTangent<double> tr;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) tr = tr + gi(a, b) * second_fundamental(hz, K, a, b);
    return norm(tr);
  });
}

double second_fundamental_max(const LiftField& lift) {
  lift.grid.require_min(5, "second_fundamental_max");
  return detail::interior_max(lift.grid, 4, [&](int i, int j) {
    const Horizontal hz = horizontal_at(lift, i, j);
    const Tensor K = lift_difference_tensor(lift, i, j);
    double m = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) m = std::max(m, norm(second_fundamental(hz, K, a, b)));
    return m;
  });
}

void write_surface_csv(std::ostream& os, const LiftField& lift, const SurfaceData& fields) {
  const Grid2& g = lift.grid;
  os << "y1,y2,x1,x2,x3,chi1,chi2,chi3,u,theta\n";
  os << std::setprecision(17);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const CMPoint<double> p = s2n_normalize(CMPoint<double>{lift.x(i, j), lift.chi(i, j)});
      os << g.x(i) << ',' << g.y(j);
      for (int k = 0; k < 3; ++k) os << ',' << p.x(k);
      for (int k = 0; k < 3; ++k) os << ',' << p.chi(k);
      os << ',' << fields.u(i, j) << ',' << fields.theta(i, j) << '\n';
    }
}

}  // namespace parakahler
