#pragma once

#include <ostream>

#include "parakahler/paracomplex.hpp"
#include "parakahler/surface2d.hpp"

namespace parakahler {

enum class PathMode { row_major, column_major };

// Frame over the grid; F = exp(logscale) * F0 with det F0 = det Finit.
struct FrameField {
  Grid2 grid;
  Signature sig;
  GridField<Mat3cd> F;
  GridField<Mat3cd> F0;
  ComplexField logscale;
  Mat3cd Finit = Mat3cd::Identity();
  int base_i = 0;
  int base_j = 0;
};

// Magnus steps outward from the centre node, where F = Finit. row_major integrates the centre
// column first and then every row along x; column_major the centre row and then every column.
FrameField integrate_frame(const MCPair& mc, const Mat3cd& Finit = Mat3cd::Identity(),
                           PathMode mode = PathMode::row_major);

RealField flatness_residual(const MCPair& mc);
// max entrywise |F_row - F_col| over the grid
double path_disagreement(const MCPair& mc, const Mat3cd& Finit = Mat3cd::Identity());

struct LiftField {
  Grid2 grid;
  Signature sig;
  GridField<Eigen::Vector3d> x, chi;
  GridField<Eigen::Vector3cd> xi, eta;

  LiftGrid as_lift_grid() const { return {grid, x, chi}; }
};

// Undo the gauge with the (u, theta) of `data` and read off (x, chi, xi, eta) in real ambient
// coordinates. Throws when x or chi has an imaginary part above `imag_tol`.
LiftField extract_lift(const FrameField& frame, const SurfaceData& data, double imag_tol = 1e-8);

struct LiftInvariants {
  double pairing = 0.0;   // max |<x,chi> - 1|
  double xi_chi = 0.0;    // max |<xi,chi>|
  double x_eta = 0.0;     // max |<x,eta>|
  double xi_eta = 0.0;    // max |<xi,eta>|
  double xi_etabar = 0.0; // max |<xi,conj eta> - H e^u c|
};

LiftInvariants lift_invariants(const LiftField& lift, const SurfaceData& data);

struct RoundTripReport {
  SurfaceData recovered;
  double err_u = 0, err_theta = 0, err_phi = 0, err_Q = 0, err_rho = 0;
  int margin = 2;

  double max() const;
};

// Recover (u, theta, phi, Q, rho) from the lift; errors against `reference` on nodes at least
// `margin` away from the edge.
RoundTripReport round_trip(const LiftField& lift, const SurfaceData& reference, int margin = 2);

// K(l, m, v) at node (i, j) from the lift pairings (fourth-order differences).
Tensor lift_difference_tensor(const LiftField& lift, int i, int j);
// II(X, Y) = Pi_N Pi_- f_* K(X, Y) for coordinate directions X, Y in {0, 1}
CMTangent<double> second_fundamental_form(const LiftField& lift, int i, int j, int X, int Y);
// max over interior nodes (margin 4) of |Tr_g II|
double mean_curvature_residual(const LiftField& lift);
// max over interior nodes (margin 4) of max_{X,Y} |II(X, Y)|
double second_fundamental_max(const LiftField& lift);

// Rows y1,y2,x1,x2,x3,chi1,chi2,chi3,u,theta with the |x| = |chi| representative.
void write_surface_csv(std::ostream& os, const LiftField& lift, const SurfaceData& fields);

}  // namespace parakahler
