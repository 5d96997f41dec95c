#include "hdx/constructors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hdx/util.hpp"

namespace hdx {

namespace {

using Tuple = std::vector<int>;

std::string tuple_id(const Tuple& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(t[i]);
  }
  return s;
}

/** Cells per dimension as sorted vertex tuples, plus index lookup. */
struct SimplicialData {
  std::vector<std::vector<Tuple>> cells;          // per dim, sorted
  std::vector<std::map<Tuple, int>> index;        // tuple -> position

  int dim() const { return static_cast<int>(cells.size()) - 1; }

  int find(const Tuple& t) const {
    int d = static_cast<int>(t.size()) - 1;
    auto it = index[d].find(t);
    if (it == index[d].end()) return -1;
    return it->second;
  }
};

SimplicialData close_downward(const std::vector<std::vector<int>>& facets) {
  if (facets.empty())
    throw std::invalid_argument("build_simplicial: empty facet list");
  int top = 0;
  std::vector<std::set<Tuple>> levels;
  auto put = [&](const Tuple& t) {
    int d = static_cast<int>(t.size()) - 1;
    if (d >= static_cast<int>(levels.size())) levels.resize(d + 1);
    return levels[d].insert(t).second;
  };
  // Insert facets, checking for degenerate vertex repetitions.
  std::vector<Tuple> queue;
  for (const auto& f : facets) {
    if (f.empty()) throw std::invalid_argument("build_simplicial: empty facet");
    Tuple t = f;
    std::sort(t.begin(), t.end());
    if (std::adjacent_find(t.begin(), t.end()) != t.end())
      throw std::invalid_argument("build_simplicial: repeated vertex in facet " +
                                  tuple_id(f));
    top = std::max(top, static_cast<int>(t.size()) - 1);
    if (put(t)) queue.push_back(t);
  }
  // Close under faces.
  while (!queue.empty()) {
    Tuple t = queue.back();
    queue.pop_back();
    if (t.size() == 1) continue;
    for (std::size_t j = 0; j < t.size(); ++j) {
      Tuple face;
      face.reserve(t.size() - 1);
      for (std::size_t i = 0; i < t.size(); ++i)
        if (i != j) face.push_back(t[i]);
      if (put(face)) queue.push_back(face);
    }
  }
  SimplicialData sd;
  sd.cells.resize(top + 1);
  sd.index.resize(top + 1);
  for (int d = 0; d <= top; ++d) {
    if (d >= static_cast<int>(levels.size())) continue;
    sd.cells[d].assign(levels[d].begin(), levels[d].end());
    for (int i = 0; i < static_cast<int>(sd.cells[d].size()); ++i)
      sd.index[d][sd.cells[d][i]] = i;
  }
  return sd;
}

CellComplex complex_from_simplicial(const SimplicialData& sd,
                                    const std::string& name, bool augmented) {
  int top = sd.dim();
  std::vector<std::vector<std::string>> ids(top + 1);
  for (int d = 0; d <= top; ++d)
    for (const auto& t : sd.cells[d]) ids[d].push_back(tuple_id(t));

  std::vector<SparseInt> inc;
  for (int d = 1; d <= top; ++d) {
    SparseInt b(static_cast<int>(sd.cells[d - 1].size()),
                static_cast<int>(sd.cells[d].size()));
    for (int c = 0; c < static_cast<int>(sd.cells[d].size()); ++c) {
      const Tuple& t = sd.cells[d][c];
      int sign = 1;
      for (std::size_t j = 0; j < t.size(); ++j) {
        Tuple face;
        for (std::size_t i = 0; i < t.size(); ++i)
          if (i != j) face.push_back(t[i]);
        int r = sd.find(face);
        if (r < 0) throw std::logic_error("closure missed a face");
        b.add(r, c, sign);
        sign = -sign;
      }
    }
    inc.push_back(std::move(b));
  }
  CellComplex X(name, std::move(ids), std::move(inc), augmented);
  X.validate();
  return X;
}

int sort_parity(Tuple& t) {
  // Parity of the permutation sorting t (t must have distinct entries).
  int parity = 1;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (t[i] > t[j]) parity = -parity;
  std::sort(t.begin(), t.end());
  return parity;
}

std::vector<std::vector<int>> torus_grid_facets(int m) {
  // m x m grid torus, diagonal direction alternating with row parity so
  // that the Klein glide below maps the triangulation to itself.
  auto v = [m](int x, int y) { return ((x % m) + m) % m * m + ((y % m) + m) % m; };
  std::vector<std::vector<int>> facets;
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      if (y % 2 == 0) {
        facets.push_back({v(x, y), v(x + 1, y), v(x + 1, y + 1)});
        facets.push_back({v(x, y), v(x, y + 1), v(x + 1, y + 1)});
      } else {
        facets.push_back({v(x, y), v(x + 1, y), v(x, y + 1)});
        facets.push_back({v(x + 1, y), v(x + 1, y + 1), v(x, y + 1)});
      }
    }
  return facets;
}

CellComplex presentation_complex(const std::string& name, int loops,
                                 const std::vector<int>& degrees) {
  // One vertex, `loops` loop edges, one 2-cell per loop attached with the
  // given winding degree.
  std::vector<std::vector<std::string>> ids(3);
  ids[0] = {"v"};
  for (int i = 0; i < loops; ++i) ids[1].push_back("e" + std::to_string(i));
  for (int i = 0; i < loops; ++i) ids[2].push_back("f" + std::to_string(i));
  SparseInt b1(1, loops);  // loop boundaries cancel to zero columns
  SparseInt b2(loops, loops);
  for (int i = 0; i < loops; ++i) b2.add(i, i, degrees[i]);
  CellComplex X(name, std::move(ids), {std::move(b1), std::move(b2)},
                /*augmented=*/true, /*allow_boundaryless=*/true);
  X.validate();
  return X;
}

std::vector<std::vector<int>> cross_polytope_facets() {
  // Boundary of the 4-dimensional cross polytope: vertices i (= +e_{i+1})
  // and i+4 (= -e_{i+1}); facets pick one sign per axis.
  std::vector<std::vector<int>> facets;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<int> f;
    for (int axis = 0; axis < 4; ++axis)
      f.push_back((mask >> axis) & 1 ? axis + 4 : axis);
    facets.push_back(f);
  }
  return facets;
}

}  // namespace

CellComplex build_simplicial(const std::vector<std::vector<int>>& facets,
                             const std::string& name, bool augmented) {
  return complex_from_simplicial(close_downward(facets), name, augmented);
}

CellComplex simplex_boundary(int n, bool augmented) {
  if (n < 1) throw std::invalid_argument("simplex_boundary: n >= 1 required");
  if (n > 10) throw CapExceeded("simplex_boundary: n > 10");
  std::vector<std::vector<int>> facets;
  for (int omit = 0; omit <= n; ++omit) {
    std::vector<int> f;
    for (int v = 0; v <= n; ++v)
      if (v != omit) f.push_back(v);
    facets.push_back(f);
  }
  return build_simplicial(facets, "simplex-boundary(" + std::to_string(n) + ")",
                          augmented);
}

std::string hypercube_cell_id(int deg, int base, const std::vector<int>& coords) {
  std::string s(deg, '0');
  for (int j = 0; j < deg; ++j)
    if (base >> j & 1) s[j] = '1';
  std::string out = "q" + s + "|";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(coords[i]);
  }
  return out;
}

CellComplex hypercube_skeleton(int deg, int k, bool augmented) {
  if (deg < 1) throw std::invalid_argument("hypercube_skeleton: deg >= 1");
  if (deg > 16) throw CapExceeded("hypercube_skeleton: deg > 16");
  if (k < 0 || k > 3)
    throw std::invalid_argument("hypercube_skeleton: k must be in [0, 3]");
  if (k > deg) throw std::invalid_argument("hypercube_skeleton: k > deg");

  // Free-coordinate sets per dimension, ascending lexicographic.
  std::vector<std::vector<std::vector<int>>> freesets(k + 1);
  freesets[0] = {{}};
  for (int d = 1; d <= k; ++d) {
    std::vector<int> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    while (true) {
      freesets[d].push_back(idx);
      int i = d - 1;
      while (i >= 0 && idx[i] == deg - d + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
    }
  }

  auto cell_name = [deg](const std::vector<int>& S, int base) {
    return hypercube_cell_id(deg, base, S);
  };

  std::vector<std::vector<std::string>> ids(k + 1);
  std::vector<std::map<std::pair<std::vector<int>, int>, int>> lookup(k + 1);
  for (int d = 0; d <= k; ++d) {
    for (const auto& S : freesets[d]) {
      int mask = 0;
      for (int s : S) mask |= 1 << s;
      for (int base = 0; base < (1 << deg); ++base) {
        if (base & mask) continue;
        lookup[d][{S, base}] = static_cast<int>(ids[d].size());
        ids[d].push_back(cell_name(S, base));
      }
    }
  }

  std::vector<SparseInt> inc;
  for (int d = 1; d <= k; ++d) {
    SparseInt b(static_cast<int>(ids[d - 1].size()),
                static_cast<int>(ids[d].size()));
    for (const auto& [key, c] : lookup[d]) {
      const auto& [S, base] = key;
      int sign = 1;
      for (std::size_t j = 0; j < S.size(); ++j) {
        std::vector<int> Sf;
        for (std::size_t i = 0; i < S.size(); ++i)
          if (i != j) Sf.push_back(S[i]);
        int r1 = lookup[d - 1].at({Sf, base | (1 << S[j])});
        int r0 = lookup[d - 1].at({Sf, base});
        b.add(r1, c, sign);
        b.add(r0, c, -sign);
        sign = -sign;
      }
    }
    inc.push_back(std::move(b));
  }
  CellComplex X("hypercube(" + std::to_string(deg) + "," + std::to_string(k) + ")",
                std::move(ids), std::move(inc), augmented);
  X.validate();
  return X;
}

CellComplex quotient_by_involution(const std::vector<std::vector<int>>& facets,
                                   const std::vector<int>& sigma,
                                   const std::string& name, bool augmented) {
  SimplicialData sd = close_downward(facets);
  auto apply = [&sigma](const Tuple& t) {
    Tuple img;
    img.reserve(t.size());
    for (int v : t) {
      if (v < 0 || v >= static_cast<int>(sigma.size()))
        throw std::invalid_argument("quotient_by_involution: vertex outside sigma");
      img.push_back(sigma[v]);
    }
    return img;
  };

  int top = sd.dim();
  // rep index per dim, and projection coefficient for non-representatives.
  std::vector<std::vector<std::string>> ids(top + 1);
  std::vector<std::map<Tuple, std::pair<int, int>>> proj(top + 1);  // tuple -> (rep idx, sign)
  std::vector<std::vector<Tuple>> reps(top + 1);
  for (int d = 0; d <= top; ++d) {
    for (const auto& t : sd.cells[d]) {
      Tuple img = apply(t);
      int parity = sort_parity(img);
      if (img == t)
        throw std::invalid_argument("quotient_by_involution: cell fixed by sigma");
      if (t < img) {
        int idx = static_cast<int>(reps[d].size());
        reps[d].push_back(t);
        ids[d].push_back(tuple_id(t));
        proj[d][t] = {idx, 1};
        proj[d][img] = {idx, parity};
      }
    }
    // Cells whose representative sorts later were skipped above; fill them in.
    for (const auto& t : sd.cells[d]) {
      if (proj[d].count(t)) continue;
      Tuple img = apply(t);
      int parity = sort_parity(img);
      auto it = proj[d].find(img);
      if (it == proj[d].end())
        throw std::logic_error("quotient_by_involution: orbit bookkeeping");
      proj[d][t] = {it->second.first, it->second.second * parity};
    }
  }

  std::vector<SparseInt> inc;
  for (int d = 1; d <= top; ++d) {
    SparseInt b(static_cast<int>(reps[d - 1].size()),
                static_cast<int>(reps[d].size()));
    for (int c = 0; c < static_cast<int>(reps[d].size()); ++c) {
      const Tuple& t = reps[d][c];
      int sign = 1;
      for (std::size_t j = 0; j < t.size(); ++j) {
        Tuple face;
        for (std::size_t i = 0; i < t.size(); ++i)
          if (i != j) face.push_back(t[i]);
        const auto& [row, coef] = proj[d - 1].at(face);
        b.add(row, c, sign * coef);
        sign = -sign;
      }
    }
    inc.push_back(std::move(b));
  }
  CellComplex X(name, std::move(ids), std::move(inc), augmented);
  X.validate();
  return X;
}

namespace {

CellComplex rp2_6(bool augmented = true) {
  // Antipodal quotient of the icosahedron: K6 with ten triangles.
  return build_simplicial(
      {{1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 6}, {1, 2, 6},
       {2, 3, 5}, {3, 4, 6}, {2, 4, 5}, {3, 5, 6}, {2, 4, 6}},
      "rp2-6", augmented);
}

CellComplex torus_7() {
  // Csaszar torus: vertex-minimal triangulation on 7 vertices.
  std::vector<std::vector<int>> facets;
  for (int i = 0; i < 7; ++i) {
    facets.push_back({i, (i + 1) % 7, (i + 3) % 7});
    facets.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  return build_simplicial(facets, "torus-7");
}

CellComplex klein_8() {
  // Quotient of the 4x4 torus grid by the free glide
  // (x, y) -> (x+2, -y); 8 vertices, 24 edges, 16 triangles.
  auto facets = torus_grid_facets(4);
  std::vector<int> sigma(16);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      sigma[x * 4 + y] = ((x + 2) % 4) * 4 + ((4 - y) % 4);
  return quotient_by_involution(facets, sigma, "klein-8");
}

CellComplex rp3_quotient() {
  std::vector<int> sigma(8);
  for (int i = 0; i < 8; ++i) sigma[i] = (i + 4) % 8;
  return quotient_by_involution(cross_polytope_facets(), sigma, "rp3-quotient");
}

CellComplex cycle_graph(int n) {
  if (n < 3) throw std::invalid_argument("cycle(n): n >= 3");
  std::vector<std::vector<int>> facets;
  for (int i = 0; i < n; ++i) facets.push_back({i, (i + 1) % n});
  return build_simplicial(facets, "cycle(" + std::to_string(n) + ")");
}

CellComplex path_graph(int n) {
  if (n < 2) throw std::invalid_argument("path(n): n >= 2");
  std::vector<std::vector<int>> facets;
  for (int i = 0; i + 1 < n; ++i) facets.push_back({i, i + 1});
  return build_simplicial(facets, "path(" + std::to_string(n) + ")");
}

CellComplex complete_graph(int n) {
  if (n < 2) throw std::invalid_argument("complete(n): n >= 2");
  std::vector<std::vector<int>> facets;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) facets.push_back({i, j});
  return build_simplicial(facets, "complete(" + std::to_string(n) + ")");
}

}  // namespace

CellComplex named_complex(const std::string& spec) {
  std::string base = spec;
  std::vector<long> args;
  auto open = spec.find('(');
  if (open != std::string::npos) {
    if (spec.back() != ')')
      throw std::invalid_argument("named_complex: malformed '" + spec + "'");
    base = spec.substr(0, open);
    std::string inner = spec.substr(open + 1, spec.size() - open - 2);
    std::stringstream ss(inner);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        args.push_back(std::stol(tok));
      } catch (const std::exception&) {
        throw std::invalid_argument("named_complex: bad argument in '" + spec + "'");
      }
    }
  }
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw std::invalid_argument("named_complex: '" + base + "' takes " +
                                  std::to_string(n) + " argument(s)");
  };

  if (base == "rp2-6") { need(0); return rp2_6(); }
  if (base == "torus-7") { need(0); return torus_7(); }
  if (base == "klein-8") { need(0); return klein_8(); }
  if (base == "rp3-quotient") { need(0); return rp3_quotient(); }
  if (base == "moore-z2") { need(0); return presentation_complex("moore-z2", 1, {2}); }
  if (base == "zn-presentation") {
    need(1);
    if (args[0] < 1 || args[0] > 4096)
      throw std::invalid_argument("zn-presentation(n): n in [1, 4096]");
    return presentation_complex(spec, 1, {static_cast<int>(args[0])});
  }
  if (base == "moore-z2-wedge") {
    need(1);
    if (args[0] < 1 || args[0] > 16)
      throw std::invalid_argument("moore-z2-wedge(k): k in [1, 16]");
    return presentation_complex(spec, static_cast<int>(args[0]),
                                std::vector<int>(args[0], 2));
  }
  if (base == "simplex-boundary") { need(1); return simplex_boundary(static_cast<int>(args[0])); }
  if (base == "hypercube") {
    need(2);
    return hypercube_skeleton(static_cast<int>(args[0]), static_cast<int>(args[1]));
  }
  if (base == "cycle") { need(1); return cycle_graph(static_cast<int>(args[0])); }
  if (base == "path") { need(1); return path_graph(static_cast<int>(args[0])); }
  if (base == "complete") { need(1); return complete_graph(static_cast<int>(args[0])); }
  throw std::invalid_argument("named_complex: unknown fixture '" + spec + "'");
}

std::vector<std::string> named_complex_catalog() {
  return {"rp2-6",
          "torus-7",
          "klein-8",
          "rp3-quotient",
          "moore-z2",
          "zn-presentation(n)",
          "moore-z2-wedge(k)",
          "simplex-boundary(n)",
          "hypercube(deg,k)",
          "cycle(n)",
          "path(n)",
          "complete(n)"};
}

CellComplex random_complex(int n, int dim, double p, std::uint64_t seed,
                           bool augmented) {
  if (n < 2 || n > 25) throw std::invalid_argument("random_complex: n in [2, 25]");
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("random_complex: dim in [1, 3]");
  if (dim >= n) throw std::invalid_argument("random_complex: dim < n required");
  Rng rng(seed);
  std::vector<std::vector<int>> facets;
  // Full (dim-1)-skeleton.
  std::vector<int> idx(dim);
  auto enum_subsets = [&](int k, auto&& emit) {
    std::vector<int> s(k);
    for (int i = 0; i < k; ++i) s[i] = i;
    while (true) {
      emit(s);
      int i = k - 1;
      while (i >= 0 && s[i] == n - k + i) --i;
      if (i < 0) break;
      ++s[i];
      for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
    }
  };
  (void)idx;
  enum_subsets(dim, [&](const std::vector<int>& s) { facets.push_back(s); });
  enum_subsets(dim + 1, [&](const std::vector<int>& s) {
    if (rng.chance(p)) facets.push_back(s);
  });
  std::ostringstream name;
  name << "random(n=" << n << ",dim=" << dim << ",p=" << p << ",seed=" << seed
       << ")";
  return build_simplicial(facets, name.str(), augmented);
}

CellComplex random_connected_graph(int n, int extra_edges, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_connected_graph: n >= 2");
  Rng rng(seed);
  std::set<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) {
    int u = static_cast<int>(rng.below(v));
    edges.insert({u, v});
  }
  std::vector<std::pair<int, int>> candidates;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (!edges.count({u, v})) candidates.push_back({u, v});
  rng.shuffle(candidates);
  for (int i = 0; i < extra_edges && i < static_cast<int>(candidates.size()); ++i)
    edges.insert(candidates[i]);
  std::vector<std::vector<int>> facets;
  for (const auto& [u, v] : edges) facets.push_back({u, v});
  std::ostringstream name;
  name << "graph(n=" << n << ",extra=" << extra_edges << ",seed=" << seed << ")";
  return build_simplicial(facets, name.str());
}

CellComplex cone_over_random_graph(int n, int extra_edges, std::uint64_t seed) {
  CellComplex G = random_connected_graph(n, extra_edges, seed);
  std::vector<std::vector<int>> facets;
  const SparseInt& b1 = G.incidence(1);
  for (int e = 0; e < b1.cols(); ++e) {
    const auto& col = b1.column(e);
    facets.push_back({col[0].first, col[1].first, n});
  }
  std::ostringstream name;
  name << "cone(n=" << n << ",extra=" << extra_edges << ",seed=" << seed << ")";
  return build_simplicial(facets, name.str());
}

}  // namespace hdx
