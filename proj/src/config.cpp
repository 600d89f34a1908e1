#include "matradix/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "matradix/errors.hpp"

namespace matradix {

namespace {

IntVector parse_vector(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidConfig, std::string(what) + " entries must be arrays");
  IntVector v;
  for (const auto& x : j) {
    if (x.is_number_integer()) {
      v.emplace_back(x.get<long>());
    } else if (x.is_string()) {
      Integer big;
      if (big.set_str(x.get<std::string>(), 10) != 0) throw Error(ErrorKind::InvalidConfig, "bad integer in " + std::string(what));
      v.push_back(big);
    } else {
      throw Error(ErrorKind::InvalidConfig, std::string(what) + " must contain integers");
    }
  }
  return v;
}

std::vector<IntVector> parse_vectors(const nlohmann::json& j, const char* what, std::size_t dim) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidConfig, std::string(what) + " must be an array");
  std::vector<IntVector> out;
  for (const auto& row : j) {
    // 1-dimensional digit sets may be written as plain integers
    IntVector v = row.is_array() ? parse_vector(row, what) : parse_vector(nlohmann::json::array({row}), what);
    if (v.size() != dim) throw Error(ErrorKind::InvalidConfig, std::string(what) + " entry has wrong dimension");
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

RadixSystem SystemConfig::system() const { return RadixSystem(base(), digits); }

SystemConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::InvalidConfig, "config must be a JSON object");
  if (!j.contains("A") || !j.contains("digits")) throw Error(ErrorKind::InvalidConfig, "config needs \"A\" and \"digits\"");
  SystemConfig c;
  c.name = j.value("name", "");
  const auto& rows = j["A"];
  if (!rows.is_array() || rows.empty()) throw Error(ErrorKind::InvalidConfig, "\"A\" must be a non-empty array of rows");
  std::vector<IntVector> mat;
  for (const auto& r : rows) mat.push_back(parse_vector(r, "A"));
  for (const auto& r : mat) {
    if (r.size() != mat.size()) throw Error(ErrorKind::InvalidConfig, "\"A\" must be square");
  }
  c.a = IntMatrix::from_rows(mat);
  c.digits = parse_vectors(j["digits"], "digits", mat.size());
  if (j.contains("dual_digits")) c.dual_digits = parse_vectors(j["dual_digits"], "dual_digits", mat.size());
  if (j.contains("transpose")) {
    if (!j["transpose"].is_boolean()) throw Error(ErrorKind::InvalidConfig, "\"transpose\" must be a boolean");
    c.transpose = j["transpose"].get<bool>();
  }
  if (j.contains("cycles")) {
    if (!j["cycles"].is_array()) throw Error(ErrorKind::InvalidConfig, "\"cycles\" must be an array of words");
    for (const auto& w : j["cycles"]) {
      if (!w.is_string()) throw Error(ErrorKind::InvalidConfig, "\"cycles\" entries must be strings");
      c.cycles.push_back(w.get<std::string>());
    }
  }
  return c;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string lattice_to_json(const Lattice& lattice) {
  nlohmann::json j;
  j["denom"] = lattice.denom().get_si();
  nlohmann::json basis = nlohmann::json::array();
  // one entry per basis column
  for (std::size_t j = 0; j < lattice.dim(); ++j) {
    nlohmann::json column = nlohmann::json::array();
    for (std::size_t i = 0; i < lattice.dim(); ++i) column.push_back(lattice.basis()(i, j).get_si());
    basis.push_back(column);
  }
  j["basis"] = basis;
  return j.dump();
}

}  // namespace matradix
