#include "hdx/complex_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "hdx/constructors.hpp"
#include "hdx/util.hpp"

namespace hdx {

BigRat parse_bigrat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return BigRat(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return BigRat(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational: '" + s + "'");
  }
}

Json complex_to_json(const CellComplex& X) {
  Json j;
  j["format"] = "complex/v1";
  j["name"] = X.name();
  j["augmented"] = X.augmented();
  j["allow_boundaryless"] = X.allow_boundaryless();
  Json cells = Json::array();
  for (int i = 0; i <= X.dims(); ++i) cells.push_back(X.cell_ids(i));
  j["cells"] = cells;
  Json inc = Json::array();
  for (int i = 1; i <= X.dims(); ++i) {
    for (const auto& [r, c, v] : X.incidence(i).triplets())
      inc.push_back(Json::array({i, r, c, v}));
  }
  j["incidence"] = inc;
  return j;
}

CellComplex complex_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("complex json: not an object");
  static const std::set<std::string> known = {
      "format", "name",  "augmented", "allow_boundaryless",
      "cells",  "facets", "incidence"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k))
      throw std::invalid_argument("complex json: unknown key '" + k + "'");

  const std::string name = j.value("name", std::string("complex"));
  const bool augmented = j.value("augmented", true);

  if (j.contains("facets")) {
    if (j.contains("cells") || j.contains("incidence"))
      throw std::invalid_argument("complex json: facets excludes cells/incidence");
    std::vector<std::vector<int>> facets;
    for (const auto& f : j.at("facets")) {
      std::vector<int> verts;
      for (const auto& v : f) verts.push_back(v.get<int>());
      facets.push_back(std::move(verts));
    }
    CellComplex X = build_simplicial(facets, name, augmented);
    return X;
  }

  if (!j.contains("cells") || !j.contains("incidence"))
    throw std::invalid_argument("complex json: need cells+incidence or facets");

  std::vector<std::vector<std::string>> cell_ids;
  for (const auto& lvl : j.at("cells")) {
    std::vector<std::string> ids;
    for (const auto& id : lvl) ids.push_back(id.get<std::string>());
    cell_ids.push_back(std::move(ids));
  }
  if (cell_ids.empty())
    throw std::invalid_argument("complex json: empty cells array");

  std::vector<SparseInt> inc;
  for (std::size_t i = 1; i < cell_ids.size(); ++i)
    inc.emplace_back(static_cast<int>(cell_ids[i - 1].size()),
                     static_cast<int>(cell_ids[i].size()));
  for (const auto& t : j.at("incidence")) {
    if (!t.is_array() || t.size() != 4)
      throw std::invalid_argument("complex json: incidence entries are [dim,row,col,sign]");
    int dim = t[0].get<int>();
    if (dim < 1 || dim >= static_cast<int>(cell_ids.size()))
      throw std::invalid_argument("complex json: incidence dim out of range");
    inc[dim - 1].add(t[1].get<int>(), t[2].get<int>(), t[3].get<std::int64_t>());
  }

  CellComplex X(name, std::move(cell_ids), std::move(inc), augmented,
                j.value("allow_boundaryless", false));
  X.validate();
  return X;
}

CellComplex read_complex_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument("invalid json in " + path + ": " + e.what());
  }
  return complex_from_json(j);
}

void write_complex_file(const std::string& path, const CellComplex& X) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open file for write: " + path);
  out << complex_to_json(X).dump(2) << "\n";
}

std::string canonical_dump(const Json& j) { return j.dump(); }

std::string complex_hash(const CellComplex& X) {
  return hex64(fnv1a64(canonical_dump(complex_to_json(X))));
}

static void strip_volatile(Json& j) {
  if (j.is_object()) {
    j.erase("runtime_ms");
    for (auto& [k, v] : j.items()) strip_volatile(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_volatile(v);
  }
}

std::string report_hash(Json j) {
  strip_volatile(j);
  return hex64(fnv1a64(canonical_dump(j)));
}

Json chain_to_json(const Chain& c) {
  Json j;
  j["format"] = "chain/v1";
  j["dim"] = c.dim();
  j["mode"] = c.mode() == ChainMode::rational ? "rational" : "float64";
  Json entries = Json::array();
  for (const auto& [i, v] : c.coeffs()) {
    if (c.mode() == ChainMode::rational)
      entries.push_back(Json::array({i, bigrat_str(v)}));
    else
      entries.push_back(Json::array({i, as_double(v)}));
  }
  j["entries"] = entries;
  return j;
}

Chain chain_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw std::invalid_argument("chain json: need dim and entries");
  const std::string mode = j.value("mode", std::string("rational"));
  Chain c(j.at("dim").get<int>(),
          mode == "float64" ? ChainMode::float64 : ChainMode::rational);
  if (mode != "rational" && mode != "float64")
    throw std::invalid_argument("chain json: mode must be rational or float64");
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("chain json: entries are [cell,value]");
    int idx = e[0].get<int>();
    if (e[1].is_string())
      c.add(idx, parse_bigrat(e[1].get<std::string>()));
    else
      c.add(idx, BigRat(e[1].get<double>()));
  }
  return c;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xF];
    v >>= 4;
  }
  return s;
}

int worker_count() {
  const char* env = std::getenv("HDX_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n < 1 ? 1 : n;
}

double round_sig(double v, int sig) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  std::ostringstream os;
  os << std::setprecision(sig) << v;
  return std::stod(os.str());
}

}  // namespace hdx
