#include "parakahler/surface2d.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "parallel.hpp"

namespace parakahler {

Kind parse_kind(const std::string& s) {
  if (s == "general") return Kind::general;
  if (s == "lagrangian") return Kind::lagrangian;
  if (s == "minimal") return Kind::minimal;
  if (s == "minlag") return Kind::minlag;
  throw Error("unknown kind '" + s + "'");
}

std::string to_string(Kind k) {
  switch (k) {
    case Kind::general:
      return "general";
    case Kind::lagrangian:
      return "lagrangian";
    case Kind::minimal:
      return "minimal";
    case Kind::minlag:
      return "minlag";
  }
  return "general";
}

SurfaceData SurfaceData::zeros(Signature s, const Grid2& g) {
  SurfaceData d;
  d.sig = s;
  d.grid = g;
  d.u = RealField(g, 0.0);
  d.theta = RealField(g, M_PI / 2);
  d.phi = ComplexField(g, 0.0);
  d.Q = ComplexField(g, 0.0);
  d.rho = ComplexField(g, 0.0);
  return d;
}

void SurfaceData::validate() const {
  const size_t n = static_cast<size_t>(grid.size());
  if (grid.nx < 1 || grid.ny < 1 || !(grid.hx > 0) || !(grid.hy > 0)) throw Error("surface data: bad grid");
  if (u.v.size() != n || theta.v.size() != n || phi.v.size() != n || Q.v.size() != n || rho.v.size() != n)
    throw Error("surface data: field sizes do not match the grid");
  for (size_t k = 0; k < n; ++k) {
    if (!std::isfinite(u.v[k])) throw Error("surface data: u is not finite");
    const double t = theta.v[k];
    if (!(t > theta_guard && t < M_PI - theta_guard)) throw Error("surface data: theta outside the guard band");
    if (!std::isfinite(std::abs(phi.v[k])) || !std::isfinite(std::abs(Q.v[k])) || !std::isfinite(std::abs(rho.v[k])))
      throw Error("surface data: non-finite phi, Q or rho");
  }
}

cd c_from_theta(double theta, double guard) {
  if (!(theta > guard && theta < M_PI - guard)) throw Error("c_from_theta: theta outside the guard band");
  return {1.0, std::tan(theta - M_PI / 2)};
}

double theta_from_c(cd c) { return std::atan2(c.imag(), c.real()) + M_PI / 2; }

cd sqrt_Hc(cd c, Signature s) { return s.H == 1 ? std::sqrt(c) : I1 * std::sqrt(c); }

Mat3cd gauge_D(double u, cd c, Signature s) {
  Mat3cd D = Mat3cd::Zero();
  const double e = std::exp(-0.5 * u);
  D(0, 0) = e / sqrt_Hc(c, s);
  D(1, 1) = e / sqrt_Hc(std::conj(c), s);
  D(2, 2) = I1;
  return D;
}

namespace {

// log c = -log sin(theta) + i (theta - pi/2), computed without going through tan
cd log_c(double theta) { return {-std::log(std::sin(theta)), theta - M_PI / 2}; }

SurfaceData specialize(const SurfaceData& d, Kind kind) {
  SurfaceData s = d;
  if (kind == Kind::lagrangian || kind == Kind::minlag) {
    std::fill(s.theta.v.begin(), s.theta.v.end(), M_PI / 2);
    std::fill(s.rho.v.begin(), s.rho.v.end(), cd(0.0));
  }
  if (kind == Kind::minimal || kind == Kind::minlag) std::fill(s.phi.v.begin(), s.phi.v.end(), cd(0.0));
  return s;
}

Mat3cd bracket(const Mat3cd& a, const Mat3cd& b) { return a * b - b * a; }

void require_min(const Grid2& g, int n, const char* what) { g.require_min(n, what); }

}  // namespace

MCPair build_mc(const SurfaceData& data_in, Kind kind) {
  data_in.validate();
  require_min(data_in.grid, 3, "build_mc");
  const SurfaceData d = specialize(data_in, kind);
  const Grid2& g = d.grid;
  const Signature s = d.sig;
  const double H = s.H;
  const ComplexField L = make_field<cd>(g, [&](int i, int j) { return log_c(d.theta(i, j)); });

  MCPair mc;
  mc.grid = g;
  mc.sig = s;
  mc.Uz = mc.Uzb = mc.Utz = mc.Utzb = GridField<Mat3cd>(g, Mat3cd::Zero());
  GridField<cd> root(g, 0.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) root(i, j) = sqrt_Hc(c_from_theta(d.theta(i, j), d.theta_guard), s);
  // the branch rule keeps neighbours on the same sheet; check anyway
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (i + 1 < g.nx && std::abs(root(i + 1, j) - root(i, j)) > std::abs(root(i + 1, j) + root(i, j)))
        throw Error("build_mc: square-root branch jumps between neighbouring nodes");
      if (j + 1 < g.ny && std::abs(root(i, j + 1) - root(i, j)) > std::abs(root(i, j + 1) + root(i, j)))
        throw Error("build_mc: square-root branch jumps between neighbouring nodes");
    }

  detail::parallel_for(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i) {
      const cd c = c_from_theta(d.theta(i, j), d.theta_guard);
      const cd cb = std::conj(c);
      const double ac = std::abs(c);
      const double u = d.u(i, j);
      const double eu = std::exp(u);
      const cd phi = d.phi(i, j), phib = std::conj(phi);
      const cd Q = d.Q(i, j), Qb = std::conj(Q);
      const cd rho = d.rho(i, j), rhob = std::conj(rho);
      const cd uz = fd::dz4(d.u, i, j), uzb = fd::dzb4(d.u, i, j);
      const cd Lz = fd::dz4(L, i, j), Lzb = fd::dzb4(L, i, j);
      // log cbar = conj(L)
      const cd Lbz = std::conj(Lzb), Lbzb = std::conj(Lz);
      const cd r = root(i, j);
      const cd rb = sqrt_Hc(cb, s);
      const double half = std::exp(0.5 * u);

      Mat3cd& Tz = mc.Utz(i, j);
      Tz << rho + phi / c + uz + Lz, phib / c, 1.0,
            H / cb / eu * Q, rho + phi / cb, 0.0,
            0.0, -H * cb * eu, rho;
      Mat3cd& Tzb = mc.Utzb(i, j);
      Tzb << rhob + phib / c, H / c / eu * Qb, 0.0,
             phi / cb, rhob + phib / cb + uzb + Lbzb, 1.0,
             -H * c * eu, 0.0, rhob;

      Mat3cd& Uz = mc.Uz(i, j);
      Uz << rho + 0.5 * uz + 0.5 * Lz + phi / c, phib / ac, I1 * r * half,
            H * Q / (ac * eu), rho - 0.5 * uz - 0.5 * Lbz + phi / cb, 0.0,
            0.0, I1 * rb * half, rho;
      Mat3cd& Uzb = mc.Uzb(i, j);
      Uzb << rhob - 0.5 * uzb - 0.5 * Lzb + phib / c, H * Qb / (ac * eu), 0.0,
             phi / ac, rhob + 0.5 * uzb + 0.5 * Lbzb + phib / cb, I1 * rb * half,
             I1 * r * half, 0.0, rhob;
    }
  });
  return mc;
}

RealField zero_curvature_field(const MCPair& mc) {
  const Grid2& g = mc.grid;
  g.require_min(3, "zero_curvature_field");
  RealField out(g, 0.0);
  detail::parallel_for(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i) {
      const Mat3cd Z = fd::dz(mc.Uzb, i, j) - fd::dzb(mc.Uz, i, j) + bracket(mc.Uz(i, j), mc.Uzb(i, j));
      out(i, j) = Z.norm();
    }
  });
  return out;
}

double ResidualReport::max() const {
  double m = 0.0;
  for (const Residual& r : entries)
    if (!(r.value <= m)) m = r.value;
  return m;
}

double ResidualReport::get(const std::string& name) const {
  for (const Residual& r : entries)
    if (r.name == name) return r.value;
  throw Error("no residual named '" + name + "'");
}

ResidualReport compat_residuals(const SurfaceData& d, Kind kind) {
  d.validate();
  d.grid.require_min(5, "compat_residuals");
  const Grid2& g = d.grid;
  const double H = d.sig.H;
  ResidualReport rep;
  rep.kind = kind;
  auto add = [&](const char* name, auto&& f) {
    rep.entries.push_back({name, detail::interior_max(g, 1, [&](int i, int j) { return std::abs(f(i, j)); })});
  };
  // d_z d_zbar = Lap / 4
  auto lap4 = [](const auto& f, int i, int j) { return 0.25 * fd::laplacian(f, i, j); };
  auto eu = [&](int i, int j) { return std::exp(d.u(i, j)); };
  auto Qzb = [&](int i, int j) { return fd::dzb(d.Q, i, j); };

  switch (kind) {
    case Kind::general: {
      const ComplexField c = make_field<cd>(g, [&](int i, int j) { return c_from_theta(d.theta(i, j), d.theta_guard); });
      const ComplexField Lu = make_field<cd>(g, [&](int i, int j) { return log_c(d.theta(i, j)) + d.u(i, j); });
      const ComplexField phib_c = make_field<cd>(g, [&](int i, int j) { return std::conj(d.phi(i, j)) / c(i, j); });
      const ComplexField phi_c = make_field<cd>(g, [&](int i, int j) { return d.phi(i, j) / c(i, j); });
      const RealField logc2 = make_field<double>(g, [&](int i, int j) { return -2.0 * std::log(std::sin(d.theta(i, j))); });
      add("comp_rho", [&](int i, int j) { return fd::dzb(d.rho, i, j).imag() - H * eu(i, j) * c(i, j).imag(); });
      add("complex_comp1", [&](int i, int j) {
        const double ic2 = 1.0 / std::norm(c(i, j));
        return ic2 * std::norm(d.phi(i, j)) - ic2 * std::norm(d.Q(i, j)) / (eu(i, j) * eu(i, j)) +
               H * (std::conj(c(i, j)) - 2.0 * c(i, j)) * eu(i, j) + fd::dz(phib_c, i, j) - fd::dzb(phi_c, i, j) -
               lap4(Lu, i, j);
      });
      add("complex_comp2", [&](int i, int j) {
        const cd cc = c(i, j);
        const cd k = 1.0 / std::conj(cc) - 1.0 / cc;
        const cd phi = d.phi(i, j);
        return Qzb(i, j) + k * d.Q(i, j) * std::conj(phi) -
               H * eu(i, j) * (k * phi * phi + fd::dz(d.phi, i, j) - phi * fd::dz(d.u, i, j) - phi * fd::dz(logc2, i, j));
      });
      break;
    }
    case Kind::lagrangian:
      add("lag_phi_closed", [&](int i, int j) {
        // d_z phibar = conj(d_zbar phi)
        const cd a = fd::dzb(d.phi, i, j);
        return a - std::conj(a);
      });
      add("lag_gauss", [&](int i, int j) {
        return lap4(d.u, i, j) - std::norm(d.phi(i, j)) + std::norm(d.Q(i, j)) / (eu(i, j) * eu(i, j)) + H * eu(i, j);
      });
      add("lag_codazzi", [&](int i, int j) {
        return Qzb(i, j) - H * eu(i, j) * (fd::dz(d.phi, i, j) - d.phi(i, j) * fd::dz(d.u, i, j));
      });
      break;
    case Kind::minimal: {
      const ComplexField c = make_field<cd>(g, [&](int i, int j) { return c_from_theta(d.theta(i, j), d.theta_guard); });
      const ComplexField Lu = make_field<cd>(g, [&](int i, int j) { return log_c(d.theta(i, j)) + d.u(i, j); });
      add("holomorphic_Q", Qzb);
      add("theta_equation", [&](int i, int j) {
        const double t = d.theta(i, j);
        return lap4(d.theta, i, j) - 3.0 * H * eu(i, j) * std::cos(t) / std::sin(t);
      });
      add("comp1_real", [&](int i, int j) {
        const cd cc = c(i, j);
        const cd v = -std::norm(d.Q(i, j)) / (std::norm(cc) * eu(i, j) * eu(i, j)) +
                     H * (std::conj(cc) - 2.0 * cc) * eu(i, j) - lap4(Lu, i, j);
        return v.real();
      });
      break;
    }
    case Kind::minlag:
      add("tzitzeica", [&](int i, int j) {
        return lap4(d.u, i, j) + std::norm(d.Q(i, j)) / (eu(i, j) * eu(i, j)) + H * eu(i, j);
      });
      add("holomorphic_Q", Qzb);
      break;
  }
  return rep;
}

TzitzeicaResult solve_tzitzeica(Signature sig, const ComplexField& Q, const RealField& u0, const TzitzeicaOptions& opt) {
  const Grid2& g = u0.grid;
  g.require_min(3, "solve_tzitzeica");
  if (Q.v.size() != u0.v.size()) throw Error("solve_tzitzeica: Q and u0 sizes differ");
  for (double v : u0.v)
    if (!std::isfinite(v)) throw Error("solve_tzitzeica: non-finite boundary or initial data");
  // holomorphy check with fourth-order differences away from the edges
  if (g.nx >= 5 && g.ny >= 5) {
    const double hol = detail::interior_max(g, 2, [&](int i, int j) {
      return std::abs(0.5 * (fd::dx4(Q, i, j) + I1 * fd::dy4(Q, i, j)));
    });
    if (!(hol < opt.holomorphic_tol)) throw Error("solve_tzitzeica: Q is not holomorphic");
  }
  const double H = sig.H;
  const int mx = g.nx - 2, my = g.ny - 2;
  const int N = mx * my;
  const double ax = 0.25 / (g.hx * g.hx), ay = 0.25 / (g.hy * g.hy);
  auto id = [mx](int i, int j) { return (j - 1) * mx + (i - 1); };
  std::vector<double> q2(u0.v.size());
  for (size_t k = 0; k < q2.size(); ++k) q2[k] = std::norm(Q.v[k]);
  auto q2at = [&](int i, int j) { return q2[static_cast<size_t>(g.index(i, j))]; };

  RealField u = u0;
  auto residual = [&](const RealField& w, Eigen::VectorXd& F) {
    F.resize(N);
    for (int j = 1; j < g.ny - 1; ++j)
      for (int i = 1; i < g.nx - 1; ++i) {
        const double e = std::exp(w(i, j));
        F(id(i, j)) = ax * (w(i + 1, j) - 2 * w(i, j) + w(i - 1, j)) + ay * (w(i, j + 1) - 2 * w(i, j) + w(i, j - 1)) +
                      q2at(i, j) / (e * e) + H * e;
      }
  };

  TzitzeicaResult res;
  Eigen::VectorXd F;
  residual(u, F);
  if (!F.allFinite()) throw Error("solve_tzitzeica: residual is not finite at the initial guess");
  int it = 0;
  while (F.cwiseAbs().maxCoeff() >= opt.tol) {
    if (it >= opt.max_iter) throw Error("solve_tzitzeica: no convergence within the iteration limit");
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(5 * N));
    for (int j = 1; j < g.ny - 1; ++j)
      for (int i = 1; i < g.nx - 1; ++i) {
        const int r = id(i, j);
        const double e = std::exp(u(i, j));
        trip.emplace_back(r, r, -2 * ax - 2 * ay - 2.0 * q2at(i, j) / (e * e) + H * e);
        if (i > 1) trip.emplace_back(r, id(i - 1, j), ax);
        if (i < g.nx - 2) trip.emplace_back(r, id(i + 1, j), ax);
        if (j > 1) trip.emplace_back(r, id(i, j - 1), ay);
        if (j < g.ny - 2) trip.emplace_back(r, id(i, j + 1), ay);
      }
    Eigen::SparseMatrix<double> J(N, N);
    J.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success) throw Error("solve_tzitzeica: singular Jacobian");
    const Eigen::VectorXd step = lu.solve(-F);
    // Armijo backtracking on |F|^2 / 2
    const double m0 = 0.5 * F.squaredNorm();
    double t = 1.0;
    bool accepted = false;
    RealField trial = u;
    Eigen::VectorXd Ft;
    for (int ls = 0; ls < 30; ++ls) {
      for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) trial(i, j) = u(i, j) + t * step(id(i, j));
      residual(trial, Ft);
      if (Ft.allFinite() && 0.5 * Ft.squaredNorm() <= (1.0 - 2e-4 * t) * m0) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) throw Error("solve_tzitzeica: line search exhausted (Newton diverged)");
    u = trial;
    F = Ft;
    ++it;
  }
  res.u = u;
  res.iterations = it;
  res.residual = N > 0 ? F.cwiseAbs().maxCoeff() : 0.0;
  return res;
}

RhoSolution solve_rho(const SurfaceData& d) {
  d.validate();
  const Grid2& g = d.grid;
  g.require_min(3, "solve_rho");
  if (static_cast<long>(g.nx - 1) * (g.ny - 1) > 64L * 64L)
    throw Error("solve_rho: grid exceeds the 64^2-cell limit of direct summation");
  const double H = d.sig.H;
  const ComplexField f = make_field<cd>(g, [&](int i, int j) {
    return H * c_from_theta(d.theta(i, j), d.theta_guard) * std::exp(d.u(i, j));
  });
  const double w = g.hx * g.hy / M_PI;
  RhoSolution out;
  out.rho = ComplexField(g, 0.0);
  const int N = g.size();
  detail::parallel_for(N, [&](int k) {
    const int i = k % g.nx, j = k / g.nx;
    const cd z = g.z(i, j);
    cd acc = 0.0;
    for (int jj = 0; jj < g.ny; ++jj)
      for (int ii = 0; ii < g.nx; ++ii) {
        if (ii == i && jj == j) continue;
        acc += f(ii, jj) / (z - g.z(ii, jj));
      }
    out.rho(i, j) = w * acc;
  });
  out.residual = detail::interior_max(g, 1, [&](int i, int j) { return std::abs(fd::dzb(out.rho, i, j) - f(i, j)); });
  return out;
}

DetNormalized normalize_det(const GridField<Mat3cd>& F, Signature sig) {
  DetNormalized out;
  out.F = F;
  const Mat3cd R = R_H<double>(sig);
  const Mat3cd Ri = R.inverse();
  for (size_t k = 0; k < F.v.size(); ++k) {
    const cd det = F.v[k].determinant();
    if (!(std::abs(det) > 1e-300) || !std::isfinite(std::abs(det))) throw Error("normalize_det: vanishing determinant");
    cd root;
    if (std::abs(det.imag()) <= 1e-12 * std::abs(det)) {
      root = std::cbrt(det.real());
    } else {
      root = std::pow(det, 1.0 / 3.0);
      out.max_phase = std::max(out.max_phase, std::abs(std::arg(det)));
    }
    out.F.v[k] = F.v[k] / root;
    if (std::abs(out.F.v[k].determinant() - 1.0) > 1e-10) throw Error("normalize_det: determinant is not 1 after rescaling");
    const Mat3cd A = R * out.F.v[k] * Ri;
    if (A.imag().cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, A.cwiseAbs().maxCoeff()))
      throw Error("normalize_det: frame leaves the real form");
  }
  return out;
}

namespace {

struct Graded {
  Mat3cd trace;
  std::array<Mat3cd, 6> slots;
};

Graded grade(const Mat3cd& X, int k, Signature s) {
  if (k != 6 && k != 3 && k != 2) throw Error("grading order must be 6, 3 or 2");
  Graded gr;
  gr.trace = (X.trace() / 3.0) * Mat3cd::Identity();
  gr.slots = power_grading(eigen_decompose<double>(X - gr.trace, s), 6 / k);
  return gr;
}

}  // namespace

Certificate primitive_check(const MCPair& mc, int k, double tol) {
  const Grid2& g = mc.grid;
  if (k != 6 && k != 3 && k != 2) throw Error("primitive_check: k must be 6, 3 or 2");
  Certificate cert;
  cert.k = k;
  const int minus = k - 1;
  const int plus = 1 % k;
  GridField<Mat3cd> A0(g, Mat3cd::Zero()), Am(g, Mat3cd::Zero()), B0(g, Mat3cd::Zero()), Bp(g, Mat3cd::Zero());
  for (size_t n = 0; n < mc.Uz.v.size(); ++n) {
    if (!mc.Uz.v[n].allFinite() || !mc.Uzb.v[n].allFinite()) throw Error("primitive_check: non-finite Maurer-Cartan data");
    const Graded z = grade(mc.Uz.v[n], k, mc.sig);
    const Graded zb = grade(mc.Uzb.v[n], k, mc.sig);
    cert.trace_removed = std::max({cert.trace_removed, std::abs(z.trace(0, 0)), std::abs(zb.trace(0, 0))});
    double out = 0.0;
    for (int m = 0; m < k; ++m) {
      const double nz = z.slots[m].norm(), nzb = zb.slots[m].norm();
      cert.norms_z[m] = std::max(cert.norms_z[m], nz);
      cert.norms_zb[m] = std::max(cert.norms_zb[m], nzb);
      if (m != 0 && m != minus) out += nz;
      if (m != 0 && m != plus) out += nzb;
    }
    cert.residual = std::max(cert.residual, out);
    A0.v[n] = z.slots[0];
    Am.v[n] = z.slots[minus];
    B0.v[n] = zb.slots[0];
    Bp.v[n] = zb.slots[plus];
  }
  if (k == 2) {
    g.require_min(3, "primitive_check");
    cert.harmonic_residual = detail::interior_max(g, 1, [&](int i, int j) {
      const double a = (fd::dz(Bp, i, j) + bracket(A0(i, j), Bp(i, j))).norm();
      const double b = (fd::dzb(Am, i, j) - bracket(Am(i, j), B0(i, j))).norm();
      return std::max(a, b);
    });
  }
  cert.pass = cert.residual < tol && cert.harmonic_residual < tol;
  return cert;
}

MCPair lambda_deform(const MCPair& mc, cd lambda, int k) {
  if (!(std::abs(lambda) > 0.0)) throw Error("lambda_deform: lambda must be non-zero");
  MCPair out = mc;
  const int minus = k - 1;
  const int plus = 1 % k;
  for (size_t n = 0; n < mc.Uz.v.size(); ++n) {
    const Graded z = grade(mc.Uz.v[n], k, mc.sig);
    const Graded zb = grade(mc.Uzb.v[n], k, mc.sig);
    Mat3cd a = z.trace, b = zb.trace;
    for (int m = 0; m < k; ++m) {
      a += (m == minus ? 1.0 / lambda : cd(1.0)) * z.slots[m];
      b += (m == plus ? lambda : cd(1.0)) * zb.slots[m];
    }
    out.Uz.v[n] = a;
    out.Uzb.v[n] = b;
  }
  return out;
}

double lambda_flatness(const MCPair& mc, int k, const std::vector<cd>& lambdas, bool strict, double tol) {
  if (strict && !primitive_check(mc, k, tol).pass) throw Error("lambda_flatness: input is not primitive");
  double worst = 0.0;
  for (cd l : lambdas) {
    const RealField r = zero_curvature_field(lambda_deform(mc, l, k));
    worst = std::max(worst, detail::interior_max(mc.grid, 1, [&](int i, int j) { return r(i, j); }));
  }
  return worst;
}

ImmersionDataN to_immersion_data(const MCPair& mc) {
  const Grid2& g = mc.grid;
  if (mc.Utz.v.size() != static_cast<size_t>(g.size())) throw Error("to_immersion_data: pre-gauge matrices missing");
  // (xi, xibar, x) = (x, xi_1, xi_2) T with xi = (xi_1 - i xi_2) / 2
  Mat3cd T = Mat3cd::Zero();
  T(1, 0) = 0.5;
  T(2, 0) = -0.5 * I1;
  T(1, 1) = 0.5;
  T(2, 1) = 0.5 * I1;
  T(0, 2) = 1.0;
  const Mat3cd Ti = T.inverse();
  ImmersionDataN out;
  out.n = 2;
  out.grid = GridN::from_grid2(g);
  out.pts.resize(static_cast<size_t>(g.size()));
  for (size_t k = 0; k < out.pts.size(); ++k) {
    const Mat3cd& Z = mc.Utz.v[k];
    const Mat3cd& Zb = mc.Utzb.v[k];
    const std::array<Eigen::Matrix3d, 2> U = {(T * (Z + Zb) * Ti).real(), (T * (I1 * (Z - Zb)) * Ti).real()};
    PointGeometry P;
    P.h = Eigen::MatrixXd(2, 2);
    P.psi = Eigen::VectorXd(2);
    P.gamma.assign(2, Eigen::MatrixXd::Zero(2, 2));
    for (int a = 0; a < 2; ++a) {
      P.psi(a) = U[a](0, 0);
      for (int c = 0; c < 2; ++c) P.h(c, a) = -U[a](0, c + 1);
    }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) P.gamma[b](a, c) = U[a](b + 1, c + 1) - (b == c ? P.psi(a) : 0.0);
    out.pts[k] = std::move(P);
  }
  return out;
}

}  // namespace parakahler
