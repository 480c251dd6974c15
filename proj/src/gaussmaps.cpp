#include "parakahler/gaussmaps.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace parakahler {

std::string to_string(GaussKind k) {
  switch (k) {
    case GaussKind::FL3:
      return "FL3";
    case GaussKind::SLGr:
      return "SLGr";
    case GaussKind::Fl2:
      return "Fl2";
  }
  return "FL3";
}

GaussKind parse_gauss_kind(const std::string& s) {
  if (s == "FL3") return GaussKind::FL3;
  if (s == "SLGr") return GaussKind::SLGr;
  if (s == "Fl2") return GaussKind::Fl2;
  throw Error("unknown Gauss map '" + s + "'");
}

namespace {

void require_real_form(const Mat3cd& U, Signature s, double tol) {
  if (!in_slr_group<double>(U, s, tol)) throw Error("Gauss map: matrix is outside the real form");
}

Mat3cd diag_eps() {
  const cd e = eps<double>();
  return Eigen::Vector3cd(std::pow(e, 4), e * e, 1.0).asDiagonal();
}

}  // namespace

Mat3cd gauss_FL3(const Mat3cd& U, Signature s, double tol) {
  require_real_form(U, s, tol);
  return U * P_eps<double>(s) * U.transpose();
}

Mat3cd gauss_SLGr(const Mat3cd& U, Signature s, double tol) {
  require_real_form(U, s, tol);
  return U * P_H<double>(s) * U.transpose();
}

Mat3cd gauss_Fl2(const Mat3cd& U, Signature s, double tol) {
  require_real_form(U, s, tol);
  return U * diag_eps() * U.inverse();
}

Mat3cd gauss_point(GaussKind kind, const Mat3cd& U, Signature s, double tol) {
  switch (kind) {
    case GaussKind::FL3:
      return gauss_FL3(U, s, tol);
    case GaussKind::SLGr:
      return gauss_SLGr(U, s, tol);
    case GaussKind::Fl2:
      return gauss_Fl2(U, s, tol);
  }
  return gauss_FL3(U, s, tol);
}

Mat3cd project_to_SLGr(const Mat3cd& M) { return M * M.transpose().inverse() * M; }

Mat3cd project_to_Fl2(const Mat3cd& M) { return M * M.transpose().inverse(); }

Mat3cd stabilizer_sample(GaussKind kind, Signature s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  switch (kind) {
    case GaussKind::FL3: {
      const cd a = std::polar(1.0, M_PI * U(rng));
      return Eigen::Vector3cd(a, 1.0 / a, 1.0).asDiagonal();
    }
    case GaussKind::Fl2: {
      const cd a = std::polar(std::exp(U(rng)), M_PI * U(rng));
      const cd b = std::polar(std::exp(U(rng)), M_PI * U(rng));
      return Eigen::Vector3cd(a, b, 1.0 / (a * b)).asDiagonal();
    }
    case GaussKind::SLGr: {
      // twisted rotation R_H^-1 O R_H, which preserves P_H under congruence
      Eigen::Quaterniond q(U(rng), U(rng), U(rng), U(rng));
      q.normalize();
      const Mat3cd O = q.toRotationMatrix().cast<cd>();
      const Mat3cd R = R_H<double>(s);
      return R.inverse() * O * R;
    }
  }
  return Mat3cd::Identity();
}

double stabilizer_invariance(GaussKind kind, Signature s, int trials, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Mat3cd Y;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) Y(i, j) = cd(dist(rng), dist(rng));
    Y -= (Y.trace() / 3.0) * Mat3cd::Identity();
    const Mat3cd Uq = expm(Y + tau(Y, s));
    const Mat3cd k = stabilizer_sample(kind, s, rng);
    // U k need not stay in the real form (D3 is complex), so compare the raw models
    Mat3cd a, b;
    switch (kind) {
      case GaussKind::FL3:
        a = Uq * k * P_eps<double>(s) * (Uq * k).transpose();
        b = Uq * P_eps<double>(s) * Uq.transpose();
        break;
      case GaussKind::SLGr:
        a = Uq * k * P_H<double>(s) * (Uq * k).transpose();
        b = Uq * P_H<double>(s) * Uq.transpose();
        break;
      case GaussKind::Fl2:
        a = Uq * k * diag_eps() * (Uq * k).inverse();
        b = Uq * diag_eps() * Uq.inverse();
        break;
    }
    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
  }
  return worst;
}

GridField<Mat3cd> gauss_of_frame(const FrameField& frame, GaussKind kind, double tol) {
  GridField<Mat3cd> out(frame.grid, Mat3cd::Zero());
  for (size_t k = 0; k < frame.F.v.size(); ++k) out.v[k] = gauss_point(kind, frame.F.v[k], frame.sig, tol);
  return out;
}

DiagramReport diagram_check(const FrameField& frame, double tol) {
  DiagramReport rep;
  for (const Mat3cd& U : frame.F.v) {
    const Mat3cd M = gauss_FL3(U, frame.sig, tol);
    rep.slgr = std::max(rep.slgr, (project_to_SLGr(M) - gauss_SLGr(U, frame.sig, tol)).cwiseAbs().maxCoeff());
    rep.fl2 = std::max(rep.fl2, (project_to_Fl2(M) - gauss_Fl2(U, frame.sig, tol)).cwiseAbs().maxCoeff());
  }
  return rep;
}

GaussCertificate harmonicity_certificate(const FrameField& frame, const MCPair& mc, int k, double tol) {
  for (const Mat3cd& U : frame.F.v) require_real_form(U, frame.sig, 1e-8);
  GaussCertificate gc;
  gc.map = k == 6 ? GaussKind::FL3 : k == 3 ? GaussKind::Fl2 : GaussKind::SLGr;
  gc.cert = primitive_check(mc, k, tol);
  return gc;
}

}  // namespace parakahler
