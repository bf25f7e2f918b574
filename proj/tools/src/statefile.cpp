#include "qmono_cli/statefile.hpp"

#include "qmono/linalg.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace qmono::cli {

namespace {

using nlohmann::json;

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

[[noreturn]] void structural(const std::string& path, const std::string& what) {
  throw ParseError(path + ":1: " + what);
}

json read_json(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ":" + std::to_string(line_of_byte(text, e.byte)) + ": " + e.what());
  }
}

ComplexVector read_data(const json& j, const std::string& path, std::size_t expected) {
  if (!j.contains("data") || !j["data"].is_array())
    structural(path, "missing or non-array \"data\"");
  const auto& data = j["data"];
  if (data.size() != expected)
    structural(path, "data length " + std::to_string(data.size()) + " does not match dims (" +
                         std::to_string(expected) + " entries expected)");
  ComplexVector v(static_cast<Eigen::Index>(expected));
  for (std::size_t i = 0; i < expected; ++i) {
    const auto& e = data[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      structural(path, "data[" + std::to_string(i) + "] is not an [re, im] pair");
    v[static_cast<Eigen::Index>(i)] = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return v;
}

json data_json(const ComplexVector& v) {
  json data = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    data.push_back(json::array({v[i].real(), v[i].imag()}));
  return data;
}

void write_file(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << j.dump(2) << '\n';
}

json meta_json(const Meta& meta) {
  json j = json::object();
  for (const auto& [k, v] : meta) j[k] = v;
  return j;
}

}  // namespace

StateObject load_state(const std::string& path) {
  std::string text;
  const json j = read_json(path, text);
  if (!j.is_object()) structural(path, "top level is not an object");
  if (!j.contains("kind") || !j["kind"].is_string())
    structural(path, "missing or non-string \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  if (kind != "pure" && kind != "density")
    structural(path, "unknown kind \"" + kind + "\"");
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty())
    structural(path, "missing or empty \"dims\"");

  Dims dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer())
      structural(path, "dims entries must be integers");
    const int di = d.get<int>();
    if (di < 1) throw InvariantViolation("dims: factor dimension " + std::to_string(di) + " < 1");
    dims.push_back(di);
  }
  const std::size_t n = static_cast<std::size_t>(dims_product(dims));

  if (kind == "pure") {
    PureState psi;
    psi.dims = dims;
    psi.amplitudes = read_data(j, path, n);
    const double n2 = psi.norm2();
    if (std::abs(n2 - 1.0) > tol::trace)
      throw InvariantViolation("norm: ||psi||^2 = " + std::to_string(n2));
    return psi;
  }

  DensityMatrix rho;
  rho.dims = dims;
  const ComplexVector flat = read_data(j, path, n * n);
  rho.matrix = Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                              Eigen::RowMajor>>(flat.data(), n, n);
  try {
    validate_density(rho);
  } catch (const NotHermitian& e) {
    throw InvariantViolation(std::string("hermiticity: ") + e.what());
  } catch (const NotNormalized& e) {
    throw InvariantViolation(std::string("trace: ") + e.what());
  } catch (const NotPSD& e) {
    throw InvariantViolation(std::string("positivity: ") + e.what());
  }
  return rho;
}

void save_state(const PureState& psi, const std::string& path, const Meta& meta) {
  json j;
  j["kind"] = "pure";
  j["dims"] = psi.dims;
  j["data"] = data_json(psi.amplitudes);
  if (!meta.empty()) j["meta"] = meta_json(meta);
  write_file(j, path);
}

void save_state(const DensityMatrix& rho, const std::string& path, const Meta& meta) {
  json j;
  j["kind"] = "density";
  j["dims"] = rho.dims;
  const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = rho.matrix;
  j["data"] = data_json(Eigen::Map<const ComplexVector>(rm.data(), rm.size()));
  if (!meta.empty()) j["meta"] = meta_json(meta);
  write_file(j, path);
}

void save_state(const StateObject& obj, const std::string& path, const Meta& meta) {
  std::visit([&](const auto& s) { save_state(s, path, meta); }, obj);
}

}  // namespace qmono::cli
