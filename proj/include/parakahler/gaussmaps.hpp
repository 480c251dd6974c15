#pragma once

#include <random>
#include <string>

#include "parakahler/integrator.hpp"
#include "parakahler/liealg.hpp"
#include "parakahler/surface2d.hpp"

namespace parakahler {

// Matrix models: FL3 = U P^eps U^T, SLGr = U P_H U^T, Fl2 = U diag(eps^4, eps^2, 1) U^-1.
enum class GaussKind { FL3, SLGr, Fl2 };

std::string to_string(GaussKind k);
GaussKind parse_gauss_kind(const std::string& s);

// Throws unless U lies in the twisted real form to `tol`.
Mat3cd gauss_FL3(const Mat3cd& U, Signature s, double tol = 1e-8);
Mat3cd gauss_SLGr(const Mat3cd& U, Signature s, double tol = 1e-8);
Mat3cd gauss_Fl2(const Mat3cd& U, Signature s, double tol = 1e-8);
Mat3cd gauss_point(GaussKind kind, const Mat3cd& U, Signature s, double tol = 1e-8);

// Projections out of the FL3 model: M (M^T)^-1 M and M (M^T)^-1.
Mat3cd project_to_SLGr(const Mat3cd& M);
Mat3cd project_to_Fl2(const Mat3cd& M);

// Random element of the stabilizer subgroup for the given model.
Mat3cd stabilizer_sample(GaussKind kind, Signature s, std::mt19937_64& rng);

// max ||gauss(U k) - gauss(U)|| over random real-form U and stabilizer k
double stabilizer_invariance(GaussKind kind, Signature s, int trials, unsigned long long seed = 1);

GridField<Mat3cd> gauss_of_frame(const FrameField& frame, GaussKind kind, double tol = 1e-8);

struct DiagramReport {
  double slgr = 0.0;  // max |project_to_SLGr(FL3) - SLGr|
  double fl2 = 0.0;   // max |project_to_Fl2(FL3) - Fl2|
  double max() const { return std::max(slgr, fl2); }
};

DiagramReport diagram_check(const FrameField& frame, double tol = 1e-8);

struct GaussCertificate {
  GaussKind map = GaussKind::FL3;
  Certificate cert;
};

// k = 6 certifies the FL3 Gauss map, k = 3 the flag map, k = 2 the Grassmannian map.
GaussCertificate harmonicity_certificate(const FrameField& frame, const MCPair& mc, int k, double tol = 1e-10);

}  // namespace parakahler
