#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "knot/curve.hpp"

namespace knot {

using Json = nlohmann::ordered_json;

// Every double with 17 significant digits ("%.17g"); non-finite values as null.
std::string format_double(double v);

// JSON text with two-space indentation, keys in insertion order and doubles through format_double.
std::string dump_json(const Json& j);

// {"dim": n, "modes": N, "coeffs": [[[re, im], ... k = -N..N] per dimension], "unit_speed_tol": τ | null}
Json curve_to_json(const ClosedCurve& curve);
// Coefficients in the curve layout without the curve requirements (any dimension, complex allowed).
Spectrum spectrum_from_json(const Json& j);
Spectrum load_spectrum(const std::filesystem::path& path);
// A stated unit-speed certificate is re-checked on a dense grid; a curve violating it is rejected.
ClosedCurve curve_from_json(const Json& j);

// Columns x, v_1..v_n, one row per grid point.
std::string field_to_csv(const FieldSamples& field);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

ClosedCurve load_curve(const std::filesystem::path& path);
void save_curve(const std::filesystem::path& path, const ClosedCurve& curve);

}  // namespace knot
