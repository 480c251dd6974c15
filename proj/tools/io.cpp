#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cliio {

using parakahler::cd;
using parakahler::ComplexField;
using parakahler::Grid2;
using parakahler::RealField;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

// temp file plus rename, so a failed write never leaves a partial artifact behind
void write_text_file(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".part";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    out.close();
    if (!out) {
      std::remove(tmp.c_str());
      throw std::runtime_error("write failed for '" + path + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot write '" + path + "': " + ec.message());
  }
}

namespace {

double number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string("expected a number for ") + what);
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(std::string("non-finite value for ") + what);
  return v;
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(std::string("expected an integer for ") + what);
  return j.get<int>();
}

}  // namespace

Grid2 grid_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("grid must be an object");
  for (const char* k : {"nx", "ny", "x0", "y0", "hx", "hy"})
    if (!j.contains(k)) throw ParseError(std::string("grid is missing '") + k + "'");
  Grid2 g;
  g.nx = integer(j["nx"], "grid.nx");
  g.ny = integer(j["ny"], "grid.ny");
  g.x0 = number(j["x0"], "grid.x0");
  g.y0 = number(j["y0"], "grid.y0");
  g.hx = number(j["hx"], "grid.hx");
  g.hy = number(j["hy"], "grid.hy");
  if (g.nx < 1 || g.ny < 1 || !(g.hx > 0) || !(g.hy > 0)) throw ParseError("grid sizes and spacings must be positive");
  if (static_cast<long>(g.nx) * g.ny > 4'000'000L) throw ParseError("grid is too large");
  return g;
}

json grid_to_json(const Grid2& g) {
  json j;
  j["nx"] = g.nx;
  j["ny"] = g.ny;
  j["x0"] = g.x0;
  j["y0"] = g.y0;
  j["hx"] = g.hx;
  j["hy"] = g.hy;
  return j;
}

RealField real_field(const json& j, const char* key, const Grid2& g, double fallback) {
  RealField f(g, fallback);
  if (!j.contains(key)) return f;
  const json& rows = j[key];
  if (rows.is_number()) {
    const double v = number(rows, key);
    std::fill(f.v.begin(), f.v.end(), v);
    return f;
  }
  if (!rows.is_array() || static_cast<int>(rows.size()) != g.ny)
    throw ParseError(std::string("field '") + key + "' must have ny rows");
  for (int jj = 0; jj < g.ny; ++jj) {
    const json& row = rows[static_cast<size_t>(jj)];
    if (!row.is_array() || static_cast<int>(row.size()) != g.nx)
      throw ParseError(std::string("field '") + key + "' rows must have nx entries");
    for (int i = 0; i < g.nx; ++i) f(i, jj) = number(row[static_cast<size_t>(i)], key);
  }
  return f;
}

ComplexField complex_field(const json& j, const char* re, const char* im, const Grid2& g) {
  const RealField a = real_field(j, re, g, 0.0);
  const RealField b = real_field(j, im, g, 0.0);
  ComplexField f(g, 0.0);
  for (size_t k = 0; k < f.v.size(); ++k) f.v[k] = cd(a.v[k], b.v[k]);
  return f;
}

parakahler::SurfaceData surface_from_json(const json& j, int H_override) {
  if (!j.is_object()) throw ParseError("input must be a JSON object");
  if (j.contains("schema") && j["schema"] != kSchema) throw ParseError("unsupported schema");
  int H = H_override;
  if (H == 0) {
    if (!j.contains("H")) throw ParseError("input is missing 'H'");
    H = integer(j["H"], "H");
  }
  if (H != 1 && H != -1) throw ParseError("H must be +1 or -1");
  if (!j.contains("grid")) throw ParseError("input is missing 'grid'");
  const Grid2 g = grid_from_json(j["grid"]);
  parakahler::SurfaceData d = parakahler::SurfaceData::zeros(parakahler::Signature(H), g);
  d.u = real_field(j, "u", g, 0.0);
  d.theta = real_field(j, "theta", g, M_PI / 2);
  d.phi = complex_field(j, "phi_re", "phi_im", g);
  d.Q = complex_field(j, "Q_re", "Q_im", g);
  d.rho = complex_field(j, "rho_re", "rho_im", g);
  if (j.contains("theta_guard")) d.theta_guard = number(j["theta_guard"], "theta_guard");
  try {
    d.validate();
  } catch (const parakahler::Error& e) {
    throw ParseError(e.what());
  }
  return d;
}

json real_rows(const RealField& f) {
  json rows = json::array();
  for (int jj = 0; jj < f.grid.ny; ++jj) {
    json row = json::array();
    for (int i = 0; i < f.grid.nx; ++i) row.push_back(f(i, jj));
    rows.push_back(std::move(row));
  }
  return rows;
}

json surface_to_json(const parakahler::SurfaceData& d) {
  auto part = [&](const ComplexField& f, bool imag) {
    RealField r(f.grid, 0.0);
    for (size_t k = 0; k < f.v.size(); ++k) r.v[k] = imag ? f.v[k].imag() : f.v[k].real();
    return real_rows(r);
  };
  json j;
  j["schema"] = kSchema;
  j["H"] = d.sig.H;
  j["grid"] = grid_to_json(d.grid);
  j["u"] = real_rows(d.u);
  j["theta"] = real_rows(d.theta);
  j["phi_re"] = part(d.phi, false);
  j["phi_im"] = part(d.phi, true);
  j["Q_re"] = part(d.Q, false);
  j["Q_im"] = part(d.Q, true);
  j["rho_re"] = part(d.rho, false);
  j["rho_im"] = part(d.rho, true);
  return j;
}

json matrix_json(const parakahler::Mat3cd& M) {
  json re = json::array(), im = json::array();
  for (int r = 0; r < 3; ++r) {
    json a = json::array(), b = json::array();
    for (int c = 0; c < 3; ++c) {
      a.push_back(M(r, c).real());
      b.push_back(M(r, c).imag());
    }
    re.push_back(std::move(a));
    im.push_back(std::move(b));
  }
  json j;
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

parakahler::Mat3cd matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("re")) throw ParseError("matrix must be an object with 're' (and optional 'im')");
  parakahler::Mat3cd M = parakahler::Mat3cd::Zero();
  for (const char* part : {"re", "im"}) {
    if (!j.contains(part)) continue;
    const json& rows = j[part];
    if (!rows.is_array() || rows.size() != 3) throw ParseError("matrix parts must be 3x3");
    for (int r = 0; r < 3; ++r) {
      const json& row = rows[static_cast<size_t>(r)];
      if (!row.is_array() || row.size() != 3) throw ParseError("matrix parts must be 3x3");
      for (int c = 0; c < 3; ++c) {
        const double v = number(row[static_cast<size_t>(c)], "matrix entry");
        M(r, c) += part[0] == 'r' ? cd(v, 0.0) : cd(0.0, v);
      }
    }
  }
  return M;
}

}  // namespace cliio
