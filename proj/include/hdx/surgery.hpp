#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "hdx/homology.hpp"
#include "hdx/rational.hpp"
#include "hdx/snf.hpp"

namespace hdx {

/**
 * A framed link for simultaneous slope surgery. lk[i][j] is the linking
 * number of components i and j; the diagonal holds the framing
 * self-linking lk(lambda_i, L_i), kept explicit so zero-framed and framed
 * conventions are both representable.
 */
struct FramedLink {
  std::vector<std::vector<long long>> lk;  // symmetric integer matrix
  std::vector<std::string> names;         // optional labels, size n or empty

  int size() const { return static_cast<int>(lk.size()); }
};

/** Throws std::invalid_argument unless lk is square and symmetric. */
void check_link(const FramedLink& link);

/** Presentation matrix of H_1 after slope-q surgery on every component: q*I + Lk. */
IntMat presentation_matrix(const FramedLink& link, long long q);

/** H_1 of the surgered manifold: cokernel of q*I + Lk via Smith normal form. */
HomologyGroup surgery_h1(const FramedLink& link, long long q);

/** |det(q*I + Lk)| exactly, which is |H_1| when nonzero; 0 when singular. */
BigInt surgery_h1_order(const FramedLink& link, long long q);

/**
 * Smallest q >= 1 making q*I + Lk strictly diagonally dominant with a
 * positive diagonal, which forces the determinant to be nonzero.
 */
long long min_dominant_slope(const FramedLink& link);

struct MeridianStep {
  std::vector<BigRat> a;  // meridian coordinates after the step
  BigRat norm;            // |a|_1
  BigRat ratio;           // |a|_1 over the previous |a|_1
};

struct MeridianCertificate {
  BigRat factor_bound;         // (max absolute row sum of Lk) / |q|
  BigRat max_observed_ratio;   // largest per-step ratio seen
  bool paper_halving = false;  // factor_bound <= 1/2
  bool contracting = false;    // factor_bound < 1
  bool converged = false;      // finished at 0 or below tol
  int steps = 0;
};

struct MeridianResult {
  std::vector<MeridianStep> iterates;  // iterates[0] is the input vector
  MeridianCertificate certificate;
};

/**
 * Iterate the homologous-representative step a -> -(1/q) Lk a in meridian
 * coordinates until |a|_1 drops below tol or maxiter steps pass. Every
 * step's L1 ratio is bounded by certificate.factor_bound, and convergence
 * to 0 certifies the input class is rationally null-homologous. A
 * non-contracting bound is reported, never thrown. Throws
 * std::invalid_argument when q = 0 or the vector length is wrong.
 */
MeridianResult meridian_contraction(const FramedLink& link, long long q,
                                    const std::vector<BigRat>& a,
                                    const BigRat& tol = BigRat(1, 1000000),
                                    int maxiter = 256);

struct TorsionGrowthRow {
  long long q = 0;
  // torsion order of H_1; equals |det(q*I + Lk)| = |H_1| when the
  // determinant is nonzero
  BigInt h1_order = 1;
  bool rational_homology_sphere = false;  // det != 0
};

/** Exact torsion sizes for each q in [q_lo, q_hi]. */
std::vector<TorsionGrowthRow> torsion_growth_table(const FramedLink& link,
                                                   long long q_lo,
                                                   long long q_hi);

using Json = nlohmann::json;

Json link_to_json(const FramedLink& link);
/** Accepts {"lk": [[...]], "names": [...]}; unknown keys are rejected. */
FramedLink link_from_json(const Json& j);
/** One matrix row per line, entries separated by commas. */
FramedLink link_from_csv(const std::string& text);
std::string growth_table_to_csv(const std::vector<TorsionGrowthRow>& rows);
Json growth_table_to_json(const std::vector<TorsionGrowthRow>& rows);

}  // namespace hdx
