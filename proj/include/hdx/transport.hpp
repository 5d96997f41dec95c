#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hdx/chain.hpp"
#include "hdx/complex.hpp"
#include "hdx/rational.hpp"

namespace hdx {

/**
 * Transport calculus: move an i-cycle to a homologous one by exhibiting
 * an (i+1)-chain whose boundary is the difference, and bound the filling
 * obtained by chaining such moves. All certificate norms are unweighted
 * L1 and all comparisons are exact rational arithmetic.
 */

/** One move: boundary(chain) = to - from, with |chain|_1 <= cost * |from|_1. */
struct TransportStep {
  Chain from;
  Chain to;
  Chain chain;  // one degree above the cycles
  BigRat cost;
};

/**
 * A replayable record of a sequence of moves. total_cost is the achieved
 * cost of the composite move in the composable sense: it bounds both the
 * accumulated chain and the final cycle against the initial norm,
 *
 *   total_cost = max(|sum of chains|_1, |final|_1) / |initial|_1
 *
 * (zero when the initial cycle is zero). Bounding the final cycle as well
 * as the chain is what makes costs compose: a cost-x record followed by a
 * cost-y record is a cost xy + x record, and compose_transport checks
 * that estimate on the actual numbers.
 */
struct TransportCertificate {
  std::vector<TransportStep> steps;
  BigRat total_cost{0};
  std::vector<BigRat> norm_trace;  // |steps[k].to|_1

  bool empty() const { return steps.empty(); }
  const Chain& initial() const;
  const Chain& final_cycle() const;
  Chain total_chain() const;  // sum of the cobounding chains
};

/**
 * Independent replay of a certificate against the complex: step boundary
 * equations, per-step cost inequalities, from/to chaining, the norm
 * trace, that the initial chain is a cycle, and the total_cost equation.
 * Throws std::runtime_error naming the first violated step.
 */
void verify_transport(const CellComplex& X, const TransportCertificate& cert);

/** Recompute total_cost and norm_trace from the steps. */
void refresh_certificate(TransportCertificate& cert);

/**
 * Concatenate two certificates (a.final_cycle() must equal b.initial()
 * exactly). Checks the composition estimate
 * total <= a.total_cost * b.total_cost + a.total_cost arithmetically and
 * throws std::runtime_error if the composite violates it.
 */
TransportCertificate compose_transport(const TransportCertificate& a,
                                       const TransportCertificate& b);

/**
 * Step oracle for the geometric-series filler: maps an i-cycle c to a
 * pair (c', chain) with boundary(chain) = c' - c. expfill checks the
 * advertised decay |c'|_1 <= a |c|_1 and cost |chain|_1 <= x |c|_1 at
 * every step and aborts with a certified failure report if either fails.
 */
using StepOracle = std::function<std::pair<Chain, Chain>(const Chain&)>;

struct ExpfillResult {
  bool ok = false;           // contract held and the filling verified
  std::string failure;       // names the offending step when !ok
  long long failure_step = -1;
  TransportCertificate certificate;  // ends at the zero cycle when ok
  Chain filling;             // boundary(filling) = alpha
  BigRat filling_norm{0};    // |filling|_1
  BigRat cost_bound;         // x / (1 - a)
  BigRat norm_bound;         // cost_bound * |alpha|_1 + tol
  long long oracle_steps = 0;
};

/**
 * Fill the cycle alpha by iterating the oracle until the residual is
 * small, then closing the gap with one exact minimal filling whose norm
 * must come in under tol (more oracle rounds are taken if it does not).
 * Requires 0 < a < 1 and tol >= 0; with tol = 0 the oracle itself must
 * reach the zero cycle. The certificate transports alpha to zero and the
 * returned filling satisfies |filling|_1 <= (x/(1-a)) |alpha|_1 + tol.
 */
ExpfillResult expfill(const CellComplex& X, const StepOracle& oracle,
                      const Chain& alpha, const BigRat& a, const BigRat& x,
                      const BigRat& tol);

/**
 * The averaging oracle on 2-cycles of the 3-skeleton hypercube ambient:
 * c' = c - (1/(deg+2)) boundary(coboundary(c)), which for a 2-cycle is
 * the parallel-neighbour average (1/(deg+2)) P c. Decay and cost are both
 * (deg-2)/(deg+2). The complex must outlive the returned closure.
 */
StepOracle hypercube_averaging_oracle(const CellComplex& X, int deg);

/** Decay/cost ratio of the averaging oracle, (deg-2)/(deg+2). */
BigRat hypercube_averaging_ratio(int deg);

/**
 * An edge walk on the deg-cube based at the origin. Each letter toggles
 * one coordinate; sign +1 raises it (the bit was 0), -1 lowers it. The
 * walk closes exactly when every coordinate is toggled an even number of
 * times, and the signs are forced by the toggle state, so a closed word
 * is determined by its coordinate sequence.
 */
struct HypercubeLetter {
  int coord = 0;
  int sign = 0;
};

struct HypercubeWord {
  int deg = 0;
  std::vector<HypercubeLetter> letters;
};

/** Build the word for a coordinate sequence, deriving signs by walking. */
HypercubeWord make_hypercube_word(int deg, const std::vector<int>& coords);

/** Seeded closed word of even length len: len/2 coordinates used twice. */
HypercubeWord random_closed_word(int deg, int len, std::uint64_t seed);

/** Throws unless coords are in range, signs match the walk, and it closes. */
void validate_word(const HypercubeWord& w);

/** The 1-cycle traced by the word (X must contain the cube's 1-cells). */
Chain hypercube_word_cycle(const CellComplex& X, const HypercubeWord& w);

struct ContractionResult {
  CellComplex complex;  // 2-skeleton ambient the certificate lives in
  HypercubeWord word;
  Chain cycle;     // hypercube_word_cycle of the input
  Chain filling;   // 2-chain, boundary(filling) = cycle, exact
  TransportCertificate certificate;  // cycle transported to zero
  long long squares = 0;        // commutation moves, one 2-cell each
  long long cancellations = 0;  // adjacent same-coordinate removals
  double measured_constant = 0.0;  // |filling|_1 / (deg * len)
};

/**
 * Contract a closed word to the empty word and read off a 2-chain filling
 * of its cycle. Repeatedly: cancel adjacent same-coordinate letter pairs
 * (free moves, the traced cycle is unchanged); otherwise find a repeated
 * coordinate among the first min(deg+1, len) letters, which must exist
 * since the word closes, and commute the pair together. Each commutation
 * swaps two adjacent letters and costs exactly one square 2-cell. The
 * repeated pair is the one whose second letter comes first, nearest first
 * on ties, and the left letter walks right (both directions cost the same
 * number of swaps). Squares emitted <= (deg-1) * len / 2.
 */
ContractionResult hypercube_contract_word(const HypercubeWord& w);

/**
 * One round of the averaging decomposition: the residual c_k splits as
 * d x_k + y_k + c_{k+1} with x_k = (1/(deg+2)) boundary(c_k) and
 * y_k = boundary(b_k), b_k = (1/(deg+2)) coboundary(c_k).
 */
struct DecomposeRound {
  Chain x_part;  // 1-chain primitive of the coexact piece
  Chain b_part;  // 3-chain primitive of the closed piece
  BigRat norm_before;  // |c_k|_1
  BigRat norm_after;   // |c_{k+1}|_1
};

struct DecomposeResult {
  CellComplex complex;  // 3-skeleton ambient
  int deg = 0;
  Chain x;         // 1-chain, coexact accumulator primitive
  Chain y;         // closed 2-chain
  Chain residual;  // |residual|_1 < tol
  std::vector<DecomposeRound> rounds;
  BigRat ratio_bound;  // (deg-2)/(deg+2)
  double measured_constant = 0.0;  // (|x|_1 + |y|_1) / (deg^2 |c|_1)
};

/**
 * Split a 2-chain c on the deg-cube 3-skeleton as c = d x + y + residual
 * by iterating the averaging identity
 *   c = (1/(deg+2)) (d boundary(c) + boundary(d c)) + (1/(deg+2)) P c.
 * Every round must shrink the residual by at least (deg-2)/(deg+2)
 * exactly (violations throw, they indicate an incidence bug); iteration
 * stops when |residual|_1 < tol. Requires deg >= 3 and tol > 0.
 */
DecomposeResult hypercube_decompose(int deg, const Chain& c, const BigRat& tol);

/**
 * Independent replay of a decomposition: re-derives every round from the
 * recorded primitives, re-checks the per-round ratio bound, and confirms
 * c = d x + y + residual with boundary(y) = 0, all exactly. Throws
 * std::runtime_error on the first violation.
 */
void verify_decomposition(const Chain& c, const BigRat& tol,
                          const DecomposeResult& d);

}  // namespace hdx
