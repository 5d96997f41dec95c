#include "hdx/homology.hpp"

#include <sstream>
#include <stdexcept>

#include "hdx/exact_linalg.hpp"

namespace hdx {

BigInt HomologyGroup::torsion_order() const {
  BigInt t = 1;
  for (const auto& d : torsion) t *= d;
  return t;
}

std::string HomologyGroup::str() const {
  std::ostringstream os;
  bool first = true;
  if (betti > 0) {
    os << (betti == 1 ? "Z" : "Z^" + std::to_string(betti));
    first = false;
  }
  for (const auto& d : torsion) {
    if (!first) os << " + ";
    os << "Z/" << d;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

int boundary_rank(const CellComplex& X, int i) {
  if (i < 0 || i > X.dims() + 1) return 0;
  return rank_bareiss(X.boundary_matrix(i));
}

int betti_number(const CellComplex& X, int i) {
  if (i < 0 || i > X.dims()) return 0;
  int n = X.n_cells(i);
  int nullity = n - boundary_rank(X, i);
  return nullity - boundary_rank(X, i + 1);
}

HomologyGroup homology(const CellComplex& X, int i) {
  HomologyGroup h;
  h.dim = i;
  h.betti = betti_number(X, i);
  if (i >= 0 && i < X.dims()) {
    SmithForm s = smith_normal_form(X.boundary_matrix(i + 1));
    h.torsion = s.torsion();
  }
  return h;
}

std::vector<HomologyGroup> homology_all(const CellComplex& X) {
  std::vector<HomologyGroup> out;
  for (int i = 0; i <= X.dims(); ++i) out.push_back(homology(X, i));
  return out;
}

Chain fundamental_class(const CellComplex& X) {
  int top = X.dims();
  auto basis = kernel_basis(X.boundary_matrix(top));
  if (basis.size() != 1)
    throw std::invalid_argument(
        "fundamental_class: top kernel has dimension " +
        std::to_string(basis.size()) + ", need 1");
  std::vector<BigInt> z = primitive_integer_vector(basis[0]);
  Chain c(top, ChainMode::rational);
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z[i] != 0) c.set(static_cast<int>(i), BigRat(z[i]));
  return c;
}

}  // namespace hdx
