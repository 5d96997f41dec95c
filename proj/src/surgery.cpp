#include "hdx/surgery.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace hdx {

void check_link(const FramedLink& link) {
  const int n = link.size();
  for (const auto& row : link.lk)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("surgery: linking matrix is not square");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (link.lk[i][j] != link.lk[j][i])
        throw std::invalid_argument("surgery: linking matrix is not symmetric");
  if (!link.names.empty() && static_cast<int>(link.names.size()) != n)
    throw std::invalid_argument("surgery: component name count mismatch");
}

IntMat presentation_matrix(const FramedLink& link, long long q) {
  check_link(link);
  const int n = link.size();
  IntMat m(n, std::vector<BigInt>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m[i][j] = link.lk[i][j];
      if (i == j) m[i][j] += q;
    }
  return m;
}

HomologyGroup surgery_h1(const FramedLink& link, long long q) {
  HomologyGroup h;
  h.dim = 1;
  if (link.size() == 0) return h;
  SmithForm sf = smith_normal_form(presentation_matrix(link, q));
  h.betti = link.size() - sf.rank;
  h.torsion = sf.torsion();
  return h;
}

BigInt surgery_h1_order(const FramedLink& link, long long q) {
  if (link.size() == 0) return 1;
  SmithForm sf = smith_normal_form(presentation_matrix(link, q));
  if (sf.rank < link.size()) return 0;
  BigInt d = 1;
  for (int i = 0; i < link.size(); ++i) d *= sf.diagonal[i];
  return d;
}

long long min_dominant_slope(const FramedLink& link) {
  check_link(link);
  long long q = 1;
  for (int i = 0; i < link.size(); ++i) {
    long long off = 0;
    for (int j = 0; j < link.size(); ++j)
      if (j != i) off += std::llabs(link.lk[i][j]);
    q = std::max(q, off - link.lk[i][i] + 1);
    q = std::max(q, -link.lk[i][i] + 1);
  }
  return q;
}

namespace {

BigRat vec_l1(const std::vector<BigRat>& v) {
  BigRat s = 0;
  for (const BigRat& x : v) s += x < 0 ? -x : x;
  return s;
}

}  // namespace

MeridianResult meridian_contraction(const FramedLink& link, long long q,
                                    const std::vector<BigRat>& a,
                                    const BigRat& tol, int maxiter) {
  check_link(link);
  if (q == 0) throw std::invalid_argument("surgery: meridian contraction needs q != 0");
  const int n = link.size();
  if (static_cast<int>(a.size()) != n)
    throw std::invalid_argument("surgery: coordinate vector length mismatch");

  MeridianResult res;
  long long rowsum = 0;
  for (int i = 0; i < n; ++i) {
    long long s = 0;
    for (int j = 0; j < n; ++j) s += std::llabs(link.lk[i][j]);
    rowsum = std::max(rowsum, s);
  }
  MeridianCertificate& cert = res.certificate;
  cert.factor_bound = BigRat(rowsum, std::llabs(q));
  cert.paper_halving = cert.factor_bound <= BigRat(1, 2);
  cert.contracting = cert.factor_bound < 1;

  std::vector<BigRat> cur = a;
  res.iterates.push_back({cur, vec_l1(cur), 0});
  while (cert.steps < maxiter) {
    const BigRat before = res.iterates.back().norm;
    if (before < tol || before == 0) break;
    std::vector<BigRat> next(n, BigRat(0));
    for (int i = 0; i < n; ++i) {
      BigRat s = 0;
      for (int j = 0; j < n; ++j) s += BigRat(link.lk[i][j]) * cur[j];
      next[i] = -s / q;
    }
    BigRat norm = vec_l1(next);
    BigRat ratio = norm / before;
    if (ratio > cert.factor_bound)
      throw std::logic_error("surgery: step ratio exceeds the row-sum bound");
    cert.max_observed_ratio = std::max(cert.max_observed_ratio, ratio);
    cur = next;
    res.iterates.push_back({cur, norm, ratio});
    ++cert.steps;
  }
  const BigRat fin = res.iterates.back().norm;
  cert.converged = fin == 0 || fin < tol;
  return res;
}

std::vector<TorsionGrowthRow> torsion_growth_table(const FramedLink& link,
                                                   long long q_lo, long long q_hi) {
  if (q_lo > q_hi) throw std::invalid_argument("surgery: empty slope range");
  std::vector<TorsionGrowthRow> rows;
  for (long long q = q_lo; q <= q_hi; ++q) {
    TorsionGrowthRow row;
    row.q = q;
    if (link.size() == 0) {
      row.rational_homology_sphere = true;
      rows.push_back(std::move(row));
      continue;
    }
    SmithForm sf = smith_normal_form(presentation_matrix(link, q));
    row.rational_homology_sphere = sf.rank == link.size();
    row.h1_order = 1;
    for (int i = 0; i < sf.rank; ++i) row.h1_order *= sf.diagonal[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

Json link_to_json(const FramedLink& link) {
  check_link(link);
  Json j;
  j["lk"] = link.lk;
  if (!link.names.empty()) j["names"] = link.names;
  return j;
}

FramedLink link_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("lk"))
    throw std::invalid_argument("surgery: expected an object with an lk matrix");
  for (const auto& [key, val] : j.items())
    if (key != "lk" && key != "names")
      throw std::invalid_argument("surgery: unknown key '" + key + "'");
  FramedLink link;
  for (const auto& row : j.at("lk")) {
    link.lk.emplace_back();
    for (const auto& v : row) {
      if (!v.is_number_integer())
        throw std::invalid_argument("surgery: linking entries must be integers");
      link.lk.back().push_back(v.get<long long>());
    }
  }
  if (j.contains("names")) link.names = j.at("names").get<std::vector<std::string>>();
  check_link(link);
  return link;
}

FramedLink link_from_csv(const std::string& text) {
  FramedLink link;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    link.lk.emplace_back();
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) {
      std::size_t pos = 0;
      long long v = std::stoll(field, &pos);
      if (field.find_first_not_of(" \t\r", pos) != std::string::npos)
        throw std::invalid_argument("surgery: bad csv entry '" + field + "'");
      link.lk.back().push_back(v);
    }
  }
  check_link(link);
  return link;
}

std::string growth_table_to_csv(const std::vector<TorsionGrowthRow>& rows) {
  std::ostringstream os;
  os << "q,h1_order,rational_homology_sphere\n";
  for (const auto& r : rows)
    os << r.q << "," << r.h1_order.str() << ","
       << (r.rational_homology_sphere ? "true" : "false") << "\n";
  return os.str();
}

Json growth_table_to_json(const std::vector<TorsionGrowthRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows)
    out.push_back({{"q", r.q},
                   {"h1_order", r.h1_order.str()},
                   {"rational_homology_sphere", r.rational_homology_sphere}});
  return out;
}

}  // namespace hdx
