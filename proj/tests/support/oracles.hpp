#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "parakahler/liealg.hpp"

namespace testsupport {

using parakahler::cd;
using parakahler::Mat3cd;
using parakahler::Signature;

// Deterministic generators for property tests.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(unsigned long long seed) : gen(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  cd complex(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }
  Eigen::Vector3d vec3(double r = 1.0) { return {uniform(-r, r), uniform(-r, r), uniform(-r, r)}; }
  Eigen::Matrix3d real3(double r = 1.0);
  Mat3cd complex3(double r = 1.0);
  Mat3cd traceless3(double r = 1.0);
  // tau-fixed trace-free element Y + tau(Y)
  Mat3cd slr_algebra(Signature s, double r = 1.0);
  // exp of a small real-form algebra element
  Mat3cd slr_group(Signature s, double r = 0.5);
  Eigen::Matrix3d rotation();
};

// exp via eigendecomposition V diag(e^lambda) V^-1; independent of the Pade route.
Mat3cd expm_eig(const Mat3cd& A);
// Truncated Taylor series in long double.
Mat3cd expm_taylor(const Mat3cd& A, int terms = 60);

double max_abs(const Mat3cd& A);

// Eigenspace basis matrices typed in by hand, independent of the library; `which` picks a (0) or b (1)
// in the two-parameter slots 1 and 5.
Mat3cd table_basis(int j, int which, int H);

}  // namespace testsupport
