#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "io.hpp"
#include "parakahler/frames.hpp"
#include "parakahler/gaussmaps.hpp"
#include "parakahler/integrator.hpp"
#include "parakahler/liealg.hpp"
#include "parakahler/surface2d.hpp"

namespace pk = parakahler;
using cliio::json;

namespace {

struct RunConfig {
  std::string input;
  std::string output;
  double tol_flat = 1e-8;
  double tol_rt = 1e-5;
  double tol_cert = 1e-10;
  std::string kind;
  int H = 0;
  std::vector<double> lambda_args;  // pairs (re, im)
  std::vector<int> k_values;
};

struct Outcome {
  json report;
  bool pass = true;
  std::string artifact;  // written to --output when non-empty
};

std::string ends(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0 ? suffix : "";
}

pk::Kind kind_of(const RunConfig& cfg, const json& in) {
  std::string k = cfg.kind;
  if (k.empty() && in.contains("kind") && in["kind"].is_string()) k = in["kind"].get<std::string>();
  if (k.empty()) k = "general";
  try {
    return pk::parse_kind(k);
  } catch (const pk::Error& e) {
    throw cliio::ParseError(e.what());
  }
}

std::vector<pk::cd> lambdas_of(const RunConfig& cfg) {
  if (cfg.lambda_args.size() % 2 != 0) throw cliio::ParseError("--lambda takes (re, im) pairs");
  std::vector<pk::cd> out;
  for (size_t k = 0; k + 1 < cfg.lambda_args.size(); k += 2) out.emplace_back(cfg.lambda_args[k], cfg.lambda_args[k + 1]);
  return out;
}

void require_grid(const pk::Grid2& g) {
  if (g.nx < 5 || g.ny < 5) throw cliio::ParseError("grid needs at least 5 nodes per axis");
}

// max interior flatness residual
double max_flatness(const pk::MCPair& mc) {
  const pk::RealField r = pk::flatness_residual(mc);
  double m = 0.0;
  for (int j = 1; j < mc.grid.ny - 1; ++j)
    for (int i = 1; i < mc.grid.nx - 1; ++i)
      if (!(r(i, j) <= m)) m = r(i, j);
  return m;
}

json residual_entry(const std::string& group, const std::string& name, double value, double tol) {
  json r;
  r["group"] = group;
  r["name"] = name;
  r["value"] = value;
  r["pass"] = value < tol;
  return r;
}

json header(const std::string& command) {
  json j;
  j["schema"] = cliio::kSchema;
  j["command"] = command;
  return j;
}

Outcome cmd_check(const RunConfig& cfg) {
  const json in = cliio::read_json_file(cfg.input);
  const pk::SurfaceData d = cliio::surface_from_json(in, cfg.H);
  const pk::Kind kind = kind_of(cfg, in);
  require_grid(d.grid);

  Outcome out;
  out.report = header("check");
  out.report["kind"] = pk::to_string(kind);
  out.report["tolerance"] = cfg.tol_flat;
  json list = json::array();
  auto add = [&](const std::string& group, const std::string& name, double v) {
    list.push_back(residual_entry(group, name, v, cfg.tol_flat));
    out.pass = out.pass && v < cfg.tol_flat;
  };
  for (const pk::Residual& r : pk::compat_residuals(d, pk::Kind::general).entries) add("surface", r.name, r.value);
  if (kind != pk::Kind::general)
    for (const pk::Residual& r : pk::compat_residuals(d, kind).entries) add(pk::to_string(kind), r.name, r.value);
  const pk::MCPair mc = pk::build_mc(d, kind);
  const pk::CompatibilityResiduals fr = pk::compatibility_residuals(pk::to_immersion_data(mc));
  add("frames", "r1", fr.max_r1);
  add("frames", "r2", fr.max_r2);
  add("frames", "r3", fr.max_r3);
  add("frames", "flatness", max_flatness(mc));
  const std::vector<pk::cd> lambdas = lambdas_of(cfg);
  if (!lambdas.empty()) add("lambda_family", "lambda_flatness", pk::lambda_flatness(mc, 6, lambdas, false));
  out.report["residuals"] = std::move(list);
  out.report["pass"] = out.pass;
  if (!cfg.output.empty()) out.artifact = out.report.dump(2) + "\n";
  return out;
}

Outcome cmd_synthesize(const RunConfig& cfg) {
  const json in = cliio::read_json_file(cfg.input);
  if (!in.is_object()) throw cliio::ParseError("input must be a JSON object");
  int H = cfg.H;
  if (H == 0) {
    if (!in.contains("H") || !in["H"].is_number_integer()) throw cliio::ParseError("input is missing integer 'H'");
    H = in["H"].get<int>();
  }
  if (H != 1 && H != -1) throw cliio::ParseError("H must be +1 or -1");
  // default 65 x 65 on [-0.7, 0.7]^2
  const pk::Grid2 g = in.contains("grid") ? cliio::grid_from_json(in["grid"]) : pk::Grid2::square(-0.7, 0.7, 65);
  require_grid(g);
  const pk::ComplexField Q = cliio::complex_field(in, "Q_re", "Q_im", g);
  const pk::RealField u0 = cliio::real_field(in, "u", g, 0.0);
  const pk::Signature sig(H);

  const pk::TzitzeicaResult tz = pk::solve_tzitzeica(sig, Q, u0);
  pk::SurfaceData d = pk::SurfaceData::zeros(sig, g);
  d.u = tz.u;
  d.Q = Q;
  const pk::MCPair mc = pk::build_mc(d, pk::Kind::minlag);
  const pk::FrameField F = pk::integrate_frame(mc);
  const pk::LiftField lift = pk::extract_lift(F, d);
  const pk::RoundTripReport rt = pk::round_trip(lift, d);
  const pk::ResidualReport comp = pk::compat_residuals(d, pk::Kind::minlag);

  double qmin = INFINITY;
  int near_zero = 0;
  for (const pk::cd q : Q.v) {
    qmin = std::min(qmin, std::abs(q));
    if (std::abs(q) < 1e-3) ++near_zero;
  }

  Outcome out;
  out.report = header("synthesize-minlag");
  out.report["H"] = H;
  out.report["newton_iterations"] = tz.iterations;
  out.report["newton_residual"] = tz.residual;
  json comps = json::array();
  for (const pk::Residual& r : comp.entries) comps.push_back(residual_entry("minlag", r.name, r.value, cfg.tol_flat));
  out.report["compatibility"] = std::move(comps);
  out.report["path_disagreement"] = pk::path_disagreement(mc);
  json err;
  err["u"] = rt.err_u;
  err["theta"] = rt.err_theta;
  err["phi"] = rt.err_phi;
  err["Q"] = rt.err_Q;
  err["rho"] = rt.err_rho;
  out.report["round_trip"] = std::move(err);
  json qz;
  qz["min_abs_Q"] = qmin;
  qz["nodes_below_1e-3"] = near_zero;
  qz["flagged"] = near_zero > 0;
  out.report["Q_zero_locus"] = std::move(qz);
  out.pass = rt.max() < cfg.tol_rt;
  out.report["tolerance_roundtrip"] = cfg.tol_rt;
  out.report["pass"] = out.pass;

  if (!cfg.output.empty()) {
    if (!ends(cfg.output, ".csv").empty()) {
      std::ostringstream os;
      pk::write_surface_csv(os, lift, d);
      out.artifact = os.str();
    } else {
      json s = cliio::surface_to_json(d);
      json rows = json::array();
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          const pk::CMPoint<double> p = pk::s2n_normalize(pk::CMPoint<double>{lift.x(i, j), lift.chi(i, j)});
          json r = json::array({g.x(i), g.y(j)});
          for (int k = 0; k < 3; ++k) r.push_back(p.x(k));
          for (int k = 0; k < 3; ++k) r.push_back(p.chi(k));
          r.push_back(d.u(i, j));
          r.push_back(d.theta(i, j));
          rows.push_back(std::move(r));
        }
      s["surface_columns"] = json::array({"y1", "y2", "x1", "x2", "x3", "chi1", "chi2", "chi3", "u", "theta"});
      s["surface"] = std::move(rows);
      out.artifact = s.dump(2) + "\n";
    }
  }
  return out;
}

struct Pipeline {
  pk::SurfaceData data;
  pk::Kind kind;
  pk::MCPair mc;
  pk::FrameField frame;
};

Pipeline run_pipeline(const RunConfig& cfg) {
  const json in = cliio::read_json_file(cfg.input);
  Pipeline p{cliio::surface_from_json(in, cfg.H), kind_of(cfg, in), {}, {}};
  require_grid(p.data.grid);
  p.mc = pk::build_mc(p.data, p.kind);
  p.frame = pk::integrate_frame(p.mc);
  return p;
}

Outcome cmd_integrate(const RunConfig& cfg) {
  const Pipeline p = run_pipeline(cfg);
  Outcome out;
  out.report = header("integrate");
  out.report["kind"] = pk::to_string(p.kind);
  const double dis = pk::path_disagreement(p.mc);
  const double flat = max_flatness(p.mc);
  out.report["path_disagreement"] = dis;
  out.report["flatness"] = flat;
  out.pass = dis < cfg.tol_flat && flat < cfg.tol_flat;
  out.report["tolerance"] = cfg.tol_flat;
  out.report["pass"] = out.pass;
  if (!cfg.output.empty()) {
    json f = header("integrate-frame");
    f["grid"] = cliio::grid_to_json(p.frame.grid);
    json frames = json::array();
    for (const pk::Mat3cd& M : p.frame.F.v) frames.push_back(cliio::matrix_json(M));
    f["frames"] = std::move(frames);
    out.artifact = f.dump(2) + "\n";
  }
  return out;
}

Outcome cmd_verify(const RunConfig& cfg) {
  const Pipeline p = run_pipeline(cfg);
  const pk::LiftField lift = pk::extract_lift(p.frame, p.data);
  const pk::RoundTripReport rt = pk::round_trip(lift, p.data);
  const pk::LiftInvariants inv = pk::lift_invariants(lift, p.data);
  Outcome out;
  out.report = header("verify");
  out.report["kind"] = pk::to_string(p.kind);
  json err;
  err["u"] = rt.err_u;
  err["theta"] = rt.err_theta;
  err["phi"] = rt.err_phi;
  err["Q"] = rt.err_Q;
  err["rho"] = rt.err_rho;
  out.report["round_trip"] = std::move(err);
  json li;
  li["pairing"] = inv.pairing;
  li["xi_chi"] = inv.xi_chi;
  li["x_eta"] = inv.x_eta;
  li["xi_eta"] = inv.xi_eta;
  li["xi_etabar"] = inv.xi_etabar;
  out.report["lift_invariants"] = std::move(li);
  out.report["mean_curvature"] = pk::mean_curvature_residual(lift);
  out.report["horizontality"] = pk::horizontality_residual(lift.as_lift_grid());
  out.pass = rt.max() < cfg.tol_rt;
  out.report["tolerance_roundtrip"] = cfg.tol_rt;
  out.report["pass"] = out.pass;
  if (!cfg.output.empty()) {
    json s = cliio::surface_to_json(rt.recovered);
    out.artifact = s.dump(2) + "\n";
  }
  return out;
}

Outcome cmd_gauss(const RunConfig& cfg) {
  Pipeline p = run_pipeline(cfg);
  const pk::DetNormalized nd = pk::normalize_det(p.frame.F, p.data.sig);
  p.frame.F = nd.F;
  const pk::DiagramReport dia = pk::diagram_check(p.frame);
  Outcome out;
  out.report = header("gauss");
  out.report["kind"] = pk::to_string(p.kind);
  out.report["det_phase_removed"] = nd.max_phase;
  out.report["diagram_deviation"] = dia.max();
  out.pass = dia.max() < 1e-10;
  const std::vector<int> ks = cfg.k_values.empty() ? std::vector<int>{6, 3, 2} : cfg.k_values;
  json certs = json::array();
  for (int k : ks) {
    if (k != 6 && k != 3 && k != 2) throw cliio::ParseError("--k must be 6, 3 or 2");
    const pk::GaussCertificate gc = pk::harmonicity_certificate(p.frame, p.mc, k, cfg.tol_cert);
    json c;
    c["k"] = k;
    c["map"] = pk::to_string(gc.map);
    c["residual"] = gc.cert.residual;
    if (k == 2) c["harmonic_residual"] = gc.cert.harmonic_residual;
    c["trace_removed"] = gc.cert.trace_removed;
    c["pass"] = gc.cert.pass;
    certs.push_back(std::move(c));
    if (!cfg.k_values.empty()) out.pass = out.pass && gc.cert.pass;
  }
  out.report["certificates"] = std::move(certs);
  out.report["pass"] = out.pass;
  if (!cfg.output.empty()) {
    json f = header("gauss-fields");
    f["grid"] = cliio::grid_to_json(p.frame.grid);
    for (pk::GaussKind gk : {pk::GaussKind::FL3, pk::GaussKind::SLGr, pk::GaussKind::Fl2}) {
      json arr = json::array();
      for (const pk::Mat3cd& M : pk::gauss_of_frame(p.frame, gk).v) arr.push_back(cliio::matrix_json(M));
      f[pk::to_string(gk)] = std::move(arr);
    }
    f["certificates"] = out.report["certificates"];
    out.artifact = f.dump(2) + "\n";
  }
  return out;
}

Outcome cmd_eigen(const RunConfig& cfg) {
  const json in = cliio::read_json_file(cfg.input);
  if (!in.is_object() || !in.contains("matrix")) throw cliio::ParseError("input needs a 'matrix' object");
  int H = cfg.H;
  if (H == 0) H = in.contains("H") && in["H"].is_number_integer() ? in["H"].get<int>() : 1;
  if (H != 1 && H != -1) throw cliio::ParseError("H must be +1 or -1");
  const pk::Mat3cd X = cliio::matrix_from_json(in["matrix"]);
  const pk::Signature sig(H);
  const auto parts = pk::eigen_decompose<double>(X, sig);
  const double total = X.norm();
  Outcome out;
  out.report = header("eigen");
  out.report["H"] = H;
  out.report["convention"] = pk::eigen_convention<double>();
  json slots = json::array();
  for (int j = 0; j < 6; ++j) {
    json s;
    s["j"] = j;
    s["mass"] = total > 0 ? parts[static_cast<size_t>(j)].norm() / total : 0.0;
    s["matrix"] = cliio::matrix_json(parts[static_cast<size_t>(j)]);
    slots.push_back(std::move(s));
  }
  out.report["parts"] = std::move(slots);
  out.report["trace"] = std::abs(X.trace());
  out.report["pass"] = true;
  if (!cfg.output.empty()) out.artifact = out.report.dump(2) + "\n";
  return out;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--input", cfg.input, "input JSON file")->required();
  sub->add_option("--output", cfg.output, "artifact output file");
  sub->add_option("--tol-flat", cfg.tol_flat, "tolerance for residuals and flatness")->check(CLI::PositiveNumber);
  sub->add_option("--tol-rt", cfg.tol_rt, "tolerance for round-trip errors")->check(CLI::PositiveNumber);
  sub->add_option("--tol-cert", cfg.tol_cert, "certificate tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--kind", cfg.kind, "general | lagrangian | minimal | minlag");
  sub->add_option("--H", cfg.H, "signature override (+1 or -1)");
  sub->add_option("--lambda", cfg.lambda_args, "lambda samples as re im pairs");
  sub->add_option("--k", cfg.k_values, "certificate orders (6, 3, 2)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"para-Kahler surface toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;
  struct Cmd {
    const char* name;
    const char* help;
    Outcome (*fn)(const RunConfig&);
  };
  const Cmd cmds[] = {
      {"check", "compatibility residuals of surface data", cmd_check},
      {"synthesize-minlag", "solve, integrate and verify a minimal Lagrangian surface", cmd_synthesize},
      {"integrate", "integrate the frame and report path independence", cmd_integrate},
      {"verify", "integrate, extract the lift and round-trip the invariants", cmd_verify},
      {"gauss", "Gauss maps and harmonicity certificates", cmd_gauss},
      {"eigen", "eigenspace decomposition of a 3x3 matrix", cmd_eigen},
  };
  std::vector<std::pair<CLI::App*, const Cmd*>> subs;
  for (const Cmd& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, cfg);
    subs.emplace_back(sub, &c);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (const auto& [sub, cmd] : subs) {
    if (!sub->parsed()) continue;
    try {
      const Outcome out = cmd->fn(cfg);
      // artifacts only for passing runs
      if (out.pass && !out.artifact.empty()) cliio::write_text_file(cfg.output, out.artifact);
      std::cout << out.report.dump(2) << "\n";
      return out.pass ? 0 : 1;
    } catch (const cliio::ParseError& e) {
      std::cerr << "input error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}
