#pragma once

#include <vector>

#include "parakahler/surface2d.hpp"

namespace testsupport {

using parakahler::Grid2;
using parakahler::SurfaceData;

// H = -1, u = 0, theta = pi/2, phi = 0, Q = 1, rho = 0
SurfaceData flat_minlag(const Grid2& g);

// u = log 2 - 2 log(1 - |z|^2): closed form for u_zzbar = e^u
double liouville_u(parakahler::cd z);
// H = -1, Q = 0 with the closed-form u
SurfaceData liouville(const Grid2& g);

// Q = 1 + z/2, H = -1; u = (2/3) log|Q| solves the Tzitzeica equation exactly
parakahler::cd synth_Q(parakahler::cd z);
double synth_u(parakahler::cd z);
// Boundary from the closed form, interior solved by Newton.
SurfaceData synthesized_minlag(const Grid2& g);
// Same Q with the closed-form u everywhere.
SurfaceData synthesized_exact(const Grid2& g);

// phi = 0, Q = 1, varying theta and u; not a solution of the compatibility equations
SurfaceData minimal_synthetic(const Grid2& g);

// Constant u, phi with |Q|^2 = e^{2u}(|phi|^2 - H e^u); flat and compatible.
SurfaceData flat_lagrangian(const Grid2& g, int H, double u, parakahler::cd phi, double argQ);

// theta = pi/2 with a varying phi
SurfaceData lagrangian_varying(const Grid2& g);

// Constant compatible data drawn at random: minlag (H = -1) or flat Lagrangian (H = +-1).
std::vector<SurfaceData> random_compatible(const Grid2& g, int count, unsigned long long seed);
// Same data with Q += eps * zbar
SurfaceData perturb_Q(const SurfaceData& d, double eps);

}  // namespace testsupport
