#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "parakahler/grid.hpp"

namespace parakahler {

template <typename Real>
using Mat3c = Eigen::Matrix<std::complex<Real>, 3, 3>;
using Mat3cd = Mat3c<double>;

struct Signature {
  int H = 1;

  Signature() = default;
  explicit Signature(int h) : H(h) {
    if (h != 1 && h != -1) throw Error("signature H must be +1 or -1");
  }
};

template <typename Real = double>
std::complex<Real> eps() {
  return std::polar(Real(1), Real(M_PI / 3));
}

// sqrt(-H): i for H = +1, 1 for H = -1
template <typename Real = double>
std::complex<Real> sqrt_minus_H(Signature s) {
  return s.H == 1 ? std::complex<Real>(0, 1) : std::complex<Real>(1, 0);
}

// sqrt(H): 1 for H = +1, i for H = -1
template <typename Real = double>
std::complex<Real> sqrt_H(Signature s) {
  return s.H == 1 ? std::complex<Real>(1, 0) : std::complex<Real>(0, 1);
}

template <typename Real = double>
Mat3c<Real> P_H(Signature s) {
  Mat3c<Real> P = Mat3c<Real>::Zero();
  P(0, 1) = P(1, 0) = 1;
  P(2, 2) = Real(-s.H);
  return P;
}

template <typename Real = double>
Mat3c<Real> P_eps(Signature s) {
  const auto e = eps<Real>();
  Mat3c<Real> P = Mat3c<Real>::Zero();
  P(0, 1) = e * e;
  P(1, 0) = std::pow(e, 4);
  P(2, 2) = Real(-s.H);
  return P;
}

template <typename Real = double>
Mat3c<Real> R_H(Signature s) {
  const Real r = Real(1) / std::sqrt(Real(2));
  const std::complex<Real> i(0, 1);
  Mat3c<Real> R = Mat3c<Real>::Zero();
  R(0, 0) = r;
  R(0, 1) = r;
  R(1, 0) = i * r;
  R(1, 1) = -i * r;
  R(2, 2) = sqrt_minus_H<Real>(s);
  return R;
}

// Order-6 automorphism X -> -P^eps X^T P^eps.
template <typename Real>
Mat3c<Real> sigma(const Mat3c<Real>& X, Signature s) {
  const Mat3c<Real> P = P_eps<Real>(s);
  return -P * X.transpose() * P;
}

// sigma^2 (X) = P2 X P2^-1 with P2 = diag(eps^4, eps^2, 1)
template <typename Real>
Mat3c<Real> sigma2(const Mat3c<Real>& X) {
  const auto e = eps<Real>();
  Eigen::Matrix<std::complex<Real>, 3, 1> d(std::pow(e, 4), e * e, 1);
  Mat3c<Real> Y;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) Y(r, c) = d(r) * X(r, c) / d(c);
  return Y;
}

// sigma^3 (X) = -P3 X^T P3 with P3 = P_H
template <typename Real>
Mat3c<Real> sigma3(const Mat3c<Real>& X, Signature s) {
  const Mat3c<Real> P = P_H<Real>(s);
  return -P * X.transpose() * P;
}

// sigma applied k times, k >= 0
template <typename Real>
Mat3c<Real> sigma_pow(const Mat3c<Real>& X, int k, Signature s) {
  Mat3c<Real> Y = X;
  for (int n = 0; n < k; ++n) Y = sigma(Y, s);
  return Y;
}

// Group form P^eps (g^T)^-1 P^eps.
template <typename Real>
Mat3c<Real> sigma_group(const Mat3c<Real>& g, Signature s) {
  Eigen::FullPivLU<Mat3c<Real>> lu(g.transpose());
  if (!lu.isInvertible()) throw Error("sigma_group: matrix is not invertible");
  const Mat3c<Real> P = P_eps<Real>(s);
  return P * lu.inverse() * P;
}

// Real-form involution Ad(P_H)(conj X); same formula on the group.
template <typename Real>
Mat3c<Real> tau(const Mat3c<Real>& X, Signature s) {
  const Mat3c<Real> P = P_H<Real>(s);
  return P * X.conjugate() * P;
}

// Sign c with sigma(g_j) = eps^{c j} g_j, read off the g1 table element once.
template <typename Real = double>
int eigen_convention() {
  static const int c = [] {
    const Signature s(1);
    Mat3c<Real> E = Mat3c<Real>::Zero();
    E(1, 2) = 1;
    E(2, 0) = -Real(s.H);
    const std::complex<Real> ratio = sigma(E, s)(1, 2) / E(1, 2);
    return std::abs(ratio - eps<Real>()) < std::abs(ratio - std::conj(eps<Real>())) ? 1 : -1;
  }();
  return c;
}

inline int mod6(int j) { return ((j % 6) + 6) % 6; }

// Component of X in g_j (eigenvalue eps^{c j} of sigma).
template <typename Real>
Mat3c<Real> project_eigenspace(const Mat3c<Real>& X, int j, Signature s) {
  const int c = eigen_convention<Real>();
  Mat3c<Real> acc = Mat3c<Real>::Zero();
  Mat3c<Real> Y = X;
  for (int k = 0; k < 6; ++k) {
    acc += std::polar(Real(1), -Real(M_PI / 3) * Real(c * j * k)) * Y;
    Y = sigma(Y, s);
  }
  return acc / Real(6);
}

template <typename Real>
std::array<Mat3c<Real>, 6> eigen_decompose(const Mat3c<Real>& X, Signature s) {
  const int c = eigen_convention<Real>();
  std::array<Mat3c<Real>, 6> powers;
  powers[0] = X;
  for (int k = 1; k < 6; ++k) powers[k] = sigma(powers[k - 1], s);
  std::array<Mat3c<Real>, 6> parts;
  for (int j = 0; j < 6; ++j) {
    parts[j] = Mat3c<Real>::Zero();
    for (int k = 0; k < 6; ++k) parts[j] += std::polar(Real(1), -Real(M_PI / 3) * Real(c * j * k)) * powers[k];
    parts[j] /= Real(6);
  }
  return parts;
}

// Grading by sigma^p (p in {1, 2, 3}, order k = 6/p): slot m collects g_j with j = m mod k.
template <typename Real>
std::array<Mat3c<Real>, 6> power_grading(const std::array<Mat3c<Real>, 6>& parts, int p) {
  if (p != 1 && p != 2 && p != 3) throw Error("power_grading: p must be 1, 2 or 3");
  const int k = 6 / p;
  std::array<Mat3c<Real>, 6> out;
  for (auto& m : out) m = Mat3c<Real>::Zero();
  for (int j = 0; j < 6; ++j) out[j % k] += parts[j];
  return out;
}

// Table elements of the eigenspaces; `which` selects the free parameter for g1 and g5
// (0: the a-slot, 1: the b-slot).
template <typename Real = double>
Mat3c<Real> basis_element(int j, int which, Signature s) {
  const Real H = Real(s.H);
  Mat3c<Real> X = Mat3c<Real>::Zero();
  switch (mod6(j)) {
    case 0:
      X(0, 0) = 1;
      X(1, 1) = -1;
      break;
    case 1:
      if (which == 1) {
        X(0, 1) = 1;
      } else {
        X(1, 2) = 1;
        X(2, 0) = -H;
      }
      break;
    case 2:
      X(0, 2) = 1;
      X(2, 1) = H;
      break;
    case 3:
      X(0, 0) = 1;
      X(1, 1) = 1;
      X(2, 2) = -2;
      break;
    case 4:
      X(1, 2) = 1;
      X(2, 0) = H;
      break;
    case 5:
      if (which == 1) {
        X(1, 0) = 1;
      } else {
        X(0, 2) = -H;
        X(2, 1) = 1;
      }
      break;
  }
  return X;
}

// tau-fixed test; algebra elements additionally need trace zero.
template <typename Real>
bool in_slr(const Mat3c<Real>& X, Signature s, Real tol = Real(1e-10)) {
  const Real scale = std::max(Real(1), X.norm());
  return (tau(X, s) - X).norm() <= tol * scale && std::abs(X.trace()) <= tol * scale;
}

template <typename Real>
bool in_slr_group(const Mat3c<Real>& g, Signature s, Real tol = Real(1e-10)) {
  const Real scale = std::max(Real(1), g.norm());
  return (tau(g, s) - g).norm() <= tol * scale && std::abs(g.determinant() - Real(1)) <= tol * scale;
}

// Ad(R_H) X = R_H X R_H^-1; real for tau-fixed X.
template <typename Real>
Mat3c<Real> RH_conjugate(const Mat3c<Real>& X, Signature s) {
  const Mat3c<Real> R = R_H<Real>(s);
  return R * X * R.inverse();
}

// Scaling-and-squaring matrix exponential with a degree-13 Pade approximant.
template <typename Derived>
typename Derived::PlainObject expm(const Eigen::MatrixBase<Derived>& A_in) {
  using M = typename Derived::PlainObject;
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  const Real theta13 = Real(5.371920351148152);
  M A = A_in;
  if (!A.allFinite()) throw Error("expm: non-finite input");
  const Real norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  if (squarings > 60) throw Error("expm: input norm too large");
  A /= std::ldexp(Real(1), squarings);
  const M Id = M::Identity(A.rows(), A.cols());
  const M A2 = A * A;
  const M A4 = A2 * A2;
  const M A6 = A4 * A2;
  const M U = A * (A6 * (Real(b[13]) * A6 + Real(b[11]) * A4 + Real(b[9]) * A2) + Real(b[7]) * A6 +
                   Real(b[5]) * A4 + Real(b[3]) * A2 + Real(b[1]) * Id);
  const M V = A6 * (Real(b[12]) * A6 + Real(b[10]) * A4 + Real(b[8]) * A2) + Real(b[6]) * A6 +
              Real(b[4]) * A4 + Real(b[2]) * A2 + Real(b[0]) * Id;
  M R = (V - U).partialPivLu().solve(V + U);
  for (int k = 0; k < squarings; ++k) R = R * R;
  if (!R.allFinite()) throw Error("expm: overflow");
  return R;
}

}  // namespace parakahler
