#pragma once

#include <string>

#include <json.hpp>

#include "parakahler/surface2d.hpp"

namespace cliio {

using json = nlohmann::ordered_json;
inline constexpr const char* kSchema = "parakahler/1";

// Input is not usable (syntax, shape or domain); maps to exit code 2.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

parakahler::Grid2 grid_from_json(const json& j);
json grid_to_json(const parakahler::Grid2& g);

// Fields are row arrays f[j][i] (j along y2). Missing fields take the specialization defaults.
parakahler::SurfaceData surface_from_json(const json& j, int H_override);
json surface_to_json(const parakahler::SurfaceData& d);

parakahler::RealField real_field(const json& j, const char* key, const parakahler::Grid2& g, double fallback);
parakahler::ComplexField complex_field(const json& j, const char* re, const char* im, const parakahler::Grid2& g);

json real_rows(const parakahler::RealField& f);
json matrix_json(const parakahler::Mat3cd& M);
parakahler::Mat3cd matrix_from_json(const json& j);

}  // namespace cliio
