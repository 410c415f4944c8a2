#include "ctxmatch/instance_io.hpp"

#include "ctxmatch/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ctxmatch {

namespace {

using nlohmann::json;

void append_upper(std::string& out, const Matrix& m) {
  out += '[';
  bool first = true;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (!first) out += ',';
      first = false;
      out += format_real(m(i, j));
    }
  }
  out += ']';
}

void append_dense(std::string& out, const Matrix& m) {
  out += '[';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != 0 || j != 0) out += ',';
      out += format_real(m(i, j));
    }
  }
  out += ']';
}

const json& field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ParameterError(std::string("instance JSON is missing field '") + key + "'");
  return *it;
}

std::vector<double> real_array(const json& doc, const char* key, std::size_t expected) {
  const json& arr = field(doc, key);
  if (!arr.is_array()) throw ParameterError(std::string("instance field '") + key + "' must be an array");
  if (arr.size() != expected) {
    throw DimensionError(std::string("instance field '") + key + "' has " + std::to_string(arr.size()) +
                         " entries, expected " + std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const json& v : arr) {
    if (!v.is_number()) throw ParameterError(std::string("instance field '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Matrix symmetric_from_upper(const std::vector<double>& values, int n) {
  Matrix m = Matrix::Zero(n, n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = values[k++];
  return m;
}

Matrix dense_from_values(const std::vector<double>& values, int rows, int cols) {
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = values[k++];
  return m;
}

}  // namespace

std::string format_real(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string instance_to_json(const Instance& inst) {
  std::string out;
  out.reserve(static_cast<std::size_t>(inst.n()) * static_cast<std::size_t>(inst.n() + 2 * inst.d()) * 24 + 128);
  out += "{\"n\":" + std::to_string(inst.n());
  out += ",\"d\":" + std::to_string(inst.d());
  out += ",\"rho\":" + format_real(inst.params.rho);
  out += ",\"eta\":" + format_real(inst.params.eta);
  out += ",\"seed\":" + std::to_string(inst.seed);
  out += ",\"pi_star\":[";
  for (int i = 0; i < inst.n(); ++i) {
    if (i) out += ',';
    out += std::to_string(inst.pi_star(i));
  }
  out += "],\"a\":";
  append_upper(out, inst.a);
  out += ",\"b\":";
  append_upper(out, inst.b);
  out += ",\"x\":";
  append_dense(out, inst.x);
  out += ",\"y\":";
  append_dense(out, inst.y);
  out += "}\n";
  return out;
}

Instance instance_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("instance JSON does not parse: ") + e.what());
  }
  if (!doc.is_object()) throw ParameterError("instance JSON must be an object");

  Instance inst;
  try {
    inst.params.n = field(doc, "n").get<int>();
    inst.params.d = field(doc, "d").get<int>();
    inst.params.rho = field(doc, "rho").get<double>();
    inst.params.eta = field(doc, "eta").get<double>();
    inst.seed = field(doc, "seed").get<std::uint64_t>();
  } catch (const json::type_error& e) {
    throw ParameterError(std::string("instance JSON has a field of the wrong type: ") + e.what());
  }
  inst.params.validate();
  const int n = inst.params.n;
  const int d = inst.params.d;

  const json& pi = field(doc, "pi_star");
  if (!pi.is_array() || pi.size() != static_cast<std::size_t>(n))
    throw DimensionError("instance field 'pi_star' must be an array of length n");
  std::vector<Node> mapping;
  for (const json& v : pi) {
    if (!v.is_number_integer()) throw ParameterError("instance field 'pi_star' must hold integers");
    mapping.push_back(v.get<Node>());
  }
  inst.pi_star = Permutation(std::move(mapping));

  const std::size_t pairs = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  const std::size_t cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(d);
  inst.a = symmetric_from_upper(real_array(doc, "a", pairs), n);
  inst.b = symmetric_from_upper(real_array(doc, "b", pairs), n);
  inst.x = dense_from_values(real_array(doc, "x", cells), n, d);
  inst.y = dense_from_values(real_array(doc, "y", cells), n, d);
  inst.validate();
  return inst;
}

void write_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << instance_to_json(inst);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

}  // namespace ctxmatch
