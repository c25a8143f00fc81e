#include "knot/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace knot {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) return "0";  // no negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void dump(const Json& j, int depth, std::string& out) {
  const std::string pad(2 * depth, ' '), inner(2 * depth + 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        dump(it.value(), depth + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      if (flat) {
        out += "[";
        for (size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(j[i], depth + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump(j[i], depth + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  dump(j, 0, out);
  out += "\n";
  return out;
}

Json curve_to_json(const ClosedCurve& curve) {
  Json coeffs = Json::array();
  for (int d = 0; d < curve.dim(); ++d) {
    Json row = Json::array();
    for (int k = -curve.modes(); k <= curve.modes(); ++k) {
      const Complex c = curve.spectrum()(d, k);
      row.push_back(Json::array({c.real(), c.imag()}));
    }
    coeffs.push_back(std::move(row));
  }
  Json j;
  j["dim"] = curve.dim();
  j["modes"] = curve.modes();
  j["coeffs"] = std::move(coeffs);
  j["unit_speed_tol"] = curve.unit_speed_tol() ? Json(*curve.unit_speed_tol()) : Json(nullptr);
  return j;
}

Spectrum spectrum_from_json(const Json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    const int modes = j.at("modes").get<int>();
    if (dim < 1 || modes < 0) throw ParameterError("spectrum json: dim must be positive and modes nonnegative");
    const Json& coeffs = j.at("coeffs");
    if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != dim)
      throw ParameterError("spectrum json: coeffs must hold one row per dimension");
    Spectrum s(dim, modes);
    for (int d = 0; d < dim; ++d) {
      const Json& row = coeffs[d];
      if (!row.is_array() || static_cast<int>(row.size()) != 2 * modes + 1)
        throw ParameterError("spectrum json: each row must hold 2 * modes + 1 coefficients");
      for (int k = -modes; k <= modes; ++k) {
        const Json& c = row[k + modes];
        if (!c.is_array() || c.size() != 2) throw ParameterError("spectrum json: coefficients are [re, im] pairs");
        s(d, k) = Complex(c[0].get<double>(), c[1].get<double>());
      }
    }
    return s;
  } catch (const Json::exception& e) {
    throw ParameterError(std::string("spectrum json: ") + e.what());
  }
}

ClosedCurve curve_from_json(const Json& j) {
  const Spectrum s = spectrum_from_json(j);
  if (s.reality_defect() > 1e-12) throw ParameterError("curve json: coefficients are not Hermitian (curve not real)");
  ClosedCurve curve(s);
  try {
    const Json& tol = j.contains("unit_speed_tol") ? j.at("unit_speed_tol") : Json(nullptr);
    if (tol.is_null()) return curve;
    const double claimed = tol.get<double>();
    if (!(claimed >= 0.0)) throw ParameterError("curve json: unit_speed_tol must be nonnegative");
    int grid = 4096;
    while (grid < 8 * curve.modes()) grid *= 2;
    if (speed_deviation(curve, grid) > claimed + 1e-13)
      throw ParameterError("curve json: stated unit_speed_tol does not hold");
    return ClosedCurve(curve.spectrum(), claimed);
  } catch (const Json::exception& e) {
    throw ParameterError(std::string("curve json: ") + e.what());
  }
}

std::string field_to_csv(const FieldSamples& field) {
  std::string out = "x";
  for (int d = 0; d < field.dim(); ++d) out += ",v_" + std::to_string(d + 1);
  out += "\n";
  const int m = field.grid_size();
  for (int j = 0; j < m; ++j) {
    out += format_double(FieldSamples::x(j, m));
    for (int d = 0; d < field.dim(); ++d) out += "," + format_double(field.values(d, j));
    out += "\n";
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write " + path.string());
  out << text;
  if (!out) throw ParameterError("write failed for " + path.string());
}

Spectrum load_spectrum(const std::filesystem::path& path) {
  try {
    return spectrum_from_json(Json::parse(read_text(path)));
  } catch (const Json::parse_error& e) {
    throw ParameterError(path.string() + ": " + e.what());
  }
}

ClosedCurve load_curve(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw ParameterError(path.string() + ": " + e.what());
  }
  return curve_from_json(j);
}

void save_curve(const std::filesystem::path& path, const ClosedCurve& curve) {
  write_text(path, dump_json(curve_to_json(curve)));
}

}  // namespace knot
