#pragma once

#include <array>
#include <string>
#include <vector>

#include "parakahler/frames.hpp"
#include "parakahler/grid.hpp"
#include "parakahler/liealg.hpp"

namespace parakahler {

enum class Kind { general, lagrangian, minimal, minlag };

Kind parse_kind(const std::string& s);
std::string to_string(Kind k);

// Fields of a definite surface over a rectangle, z = y1 + i y2.
struct SurfaceData {
  Signature sig;
  Grid2 grid;
  RealField u;
  RealField theta;
  ComplexField phi;
  ComplexField Q;
  ComplexField rho;
  double theta_guard = 0.05;

  // theta = pi/2, phi = rho = 0, u = 0, Q = 0
  static SurfaceData zeros(Signature s, const Grid2& g);
  // throws on shape mismatch, non-finite values or theta outside the guard band
  void validate() const;
};

// c = 1 + i tan(theta - pi/2); throws outside (guard, pi - guard)
cd c_from_theta(double theta, double guard = 0.05);
double theta_from_c(cd c);
// (Hc)^{1/2}: principal root for H = 1, i * principal sqrt(c) for H = -1
cd sqrt_Hc(cd c, Signature s);

struct MCPair {
  Grid2 grid;
  Signature sig;
  GridField<Mat3cd> Uz, Uzb;    // gauged
  GridField<Mat3cd> Utz, Utzb;  // before the gauge
};

MCPair build_mc(const SurfaceData& data, Kind kind);
// pointwise gauge D = diag((Hc)^{-1/2} e^{-u/2}, (H cbar)^{-1/2} e^{-u/2}, i)
Mat3cd gauge_D(double u, cd c, Signature s);

// d_z Uzb - d_zbar Uz + [Uz, Uzb]: Frobenius norm per node, central differences
RealField zero_curvature_field(const MCPair& mc);

struct Residual {
  std::string name;
  double value = 0.0;
};

struct ResidualReport {
  Kind kind = Kind::general;
  std::vector<Residual> entries;

  double max() const;
  double get(const std::string& name) const;
};

// Interior max-abs residuals of the compatibility equations for the given specialization.
ResidualReport compat_residuals(const SurfaceData& data, Kind kind);

struct TzitzeicaOptions {
  double tol = 1e-10;
  int max_iter = 50;
  double holomorphic_tol = 1e-8;
};

struct TzitzeicaResult {
  RealField u;
  int iterations = 0;
  double residual = 0.0;
};

// Newton for Lap(u)/4 + e^{-2u}|Q|^2 + H e^u = 0. Boundary values of u0 are the Dirichlet data,
// its interior is the initial guess.
TzitzeicaResult solve_tzitzeica(Signature sig, const ComplexField& Q, const RealField& u0,
                                const TzitzeicaOptions& opt = {});

struct RhoSolution {
  ComplexField rho;
  double residual = 0.0;  // interior max |d_zbar rho - H c e^u|
};

// Discrete Cauchy transform of H c e^u (direct summation, at most 64^2 cells).
RhoSolution solve_rho(const SurfaceData& data);

struct DetNormalized {
  GridField<Mat3cd> F;
  double max_phase = 0.0;  // largest |arg det| removed
};

// Rescale each frame by a cube root of its determinant so that det = 1; checks reality after Ad(R_H).
DetNormalized normalize_det(const GridField<Mat3cd>& F, Signature sig);

struct Certificate {
  int k = 6;
  double residual = 0.0;
  double harmonic_residual = 0.0;  // k = 2 only
  std::array<double, 6> norms_z{};   // per grading slot
  std::array<double, 6> norms_zb{};
  double trace_removed = 0.0;
  bool pass = false;
};

// Primitive harmonicity relative to sigma_H^{6/k}, k in {6, 3, 2}.
Certificate primitive_check(const MCPair& mc, int k, double tol = 1e-10);

// alpha_{-1} -> alpha_{-1} / lambda in Uz and alpha_1 -> lambda alpha_1 in Uzb (grading of order k).
MCPair lambda_deform(const MCPair& mc, cd lambda, int k);
// max zero-curvature residual over the lambda samples; throws on non-primitive input when strict
double lambda_flatness(const MCPair& mc, int k, const std::vector<cd>& lambdas, bool strict = true,
                       double tol = 1e-10);

// Real coordinate frame data (x, xi_1, xi_2) for the general-n machinery.
ImmersionDataN to_immersion_data(const MCPair& mc);

}  // namespace parakahler
