#include "hdx/transport.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "hdx/constructors.hpp"
#include "hdx/filling.hpp"
#include "hdx/util.hpp"

namespace hdx {

namespace {

const NormSpec& l1_norm() {
  static const NormSpec ns = NormSpec::l1();
  return ns;
}

BigRat l1(const Chain& c) { return c.norm_exact(l1_norm()); }

std::string at_step(const std::string& what, std::size_t k) {
  std::ostringstream os;
  os << "step " << k << ": " << what;
  return os.str();
}

}  // namespace

const Chain& TransportCertificate::initial() const {
  if (steps.empty())
    throw std::logic_error("TransportCertificate: no steps");
  return steps.front().from;
}

const Chain& TransportCertificate::final_cycle() const {
  if (steps.empty())
    throw std::logic_error("TransportCertificate: no steps");
  return steps.back().to;
}

Chain TransportCertificate::total_chain() const {
  if (steps.empty())
    throw std::logic_error("TransportCertificate: no steps");
  Chain sum(steps.front().chain.dim(), steps.front().chain.mode());
  for (const auto& s : steps) sum += s.chain;
  return sum;
}

void refresh_certificate(TransportCertificate& cert) {
  cert.norm_trace.clear();
  if (cert.steps.empty()) {
    cert.total_cost = BigRat(0);
    return;
  }
  for (const auto& s : cert.steps) cert.norm_trace.push_back(l1(s.to));
  BigRat base = l1(cert.initial());
  if (base == 0) {
    cert.total_cost = BigRat(0);
    return;
  }
  BigRat worst = l1(cert.total_chain());
  BigRat fin = l1(cert.final_cycle());
  if (fin > worst) worst = fin;
  cert.total_cost = worst / base;
}

void verify_transport(const CellComplex& X, const TransportCertificate& cert) {
  if (cert.steps.empty()) {
    if (cert.total_cost != 0 || !cert.norm_trace.empty())
      throw std::runtime_error("transport: nonempty summary on empty step list");
    return;
  }
  if (cert.norm_trace.size() != cert.steps.size())
    throw std::runtime_error("transport: norm trace length mismatch");

  const int i = cert.steps.front().from.dim();
  if (!apply_boundary(X, cert.steps.front().from).is_zero())
    throw std::runtime_error("transport: initial chain is not a cycle");

  for (std::size_t k = 0; k < cert.steps.size(); ++k) {
    const TransportStep& s = cert.steps[k];
    if (s.from.dim() != i || s.to.dim() != i || s.chain.dim() != i + 1)
      throw std::runtime_error(at_step("degree mismatch", k));
    if (k > 0 && !(s.from == cert.steps[k - 1].to))
      throw std::runtime_error(at_step("does not start at the previous target", k));
    if (!(apply_boundary(X, s.chain) == s.to - s.from))
      throw std::runtime_error(at_step("boundary(chain) != to - from", k));
    if (l1(s.chain) > s.cost * l1(s.from))
      throw std::runtime_error(at_step("cost bound violated", k));
    if (cert.norm_trace[k] != l1(s.to))
      throw std::runtime_error(at_step("norm trace mismatch", k));
  }

  BigRat base = l1(cert.initial());
  BigRat worst = l1(cert.total_chain());
  BigRat fin = l1(cert.final_cycle());
  if (fin > worst) worst = fin;
  if (base == 0) {
    if (worst != 0 || cert.total_cost != 0)
      throw std::runtime_error("transport: zero initial cycle with nonzero cost");
    return;
  }
  if (cert.total_cost != worst / base)
    throw std::runtime_error("transport: total_cost does not match the steps");
}

TransportCertificate compose_transport(const TransportCertificate& a,
                                       const TransportCertificate& b) {
  if (a.steps.empty()) return b;
  if (b.steps.empty()) return a;
  if (!(a.final_cycle() == b.initial()))
    throw std::runtime_error("compose_transport: endpoint mismatch");
  TransportCertificate out;
  out.steps = a.steps;
  out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
  refresh_certificate(out);
  BigRat bound = a.total_cost * b.total_cost + a.total_cost;
  if (out.total_cost > bound)
    throw std::runtime_error("compose_transport: composite cost " +
                             bigrat_str(out.total_cost) + " exceeds xy + x = " +
                             bigrat_str(bound));
  return out;
}

ExpfillResult expfill(const CellComplex& X, const StepOracle& oracle,
                      const Chain& alpha, const BigRat& a, const BigRat& x,
                      const BigRat& tol) {
  if (!(a > 0) || !(a < 1))
    throw std::invalid_argument("expfill: decay ratio must satisfy 0 < a < 1");
  if (x < 0) throw std::invalid_argument("expfill: negative cost bound");
  if (tol < 0) throw std::invalid_argument("expfill: negative tolerance");
  if (!apply_boundary(X, alpha).is_zero())
    throw std::invalid_argument("expfill: input chain is not a cycle");

  const int i = alpha.dim();
  ExpfillResult out;
  out.cost_bound = x / (BigRat(1) - a);
  out.norm_bound = out.cost_bound * l1(alpha) + tol;
  out.filling = Chain(i + 1);

  TransportCertificate cert;
  Chain cur = alpha;
  BigRat threshold = tol;
  const long long step_budget = 20000;

  auto fail = [&](long long k, const std::string& why) {
    refresh_certificate(cert);
    out.certificate = std::move(cert);
    out.ok = false;
    out.failure_step = k;
    out.failure = why;
    return out;
  };

  while (true) {
    BigRat cn = l1(cur);
    if (cn == 0) break;

    if (cn <= threshold) {
      // Close the remaining gap with one exact minimal filling, accepted
      // only if it fits under tol; otherwise demand a smaller residual.
      FillingResult fr = min_filling(X, cur, l1_norm());
      if (!fr.feasible)
        return fail(out.oracle_steps,
                    at_step("residual is not a boundary; the input cycle is "
                            "unfillable",
                            static_cast<std::size_t>(out.oracle_steps)));
      if (fr.value <= tol) {
        TransportStep s;
        s.from = cur;
        s.to = Chain(i);
        s.chain = BigRat(-1) * fr.witness;
        s.cost = fr.value / cn;
        cert.steps.push_back(std::move(s));
        cur = Chain(i);
        break;
      }
      threshold = threshold * a;
    }

    if (out.oracle_steps >= step_budget)
      return fail(out.oracle_steps,
                  at_step("step budget exhausted before the residual fit "
                          "under tol",
                          static_cast<std::size_t>(out.oracle_steps)));

    auto [next, chain] = oracle(cur);
    std::size_t k = static_cast<std::size_t>(out.oracle_steps);
    if (next.dim() != i || chain.dim() != i + 1)
      return fail(out.oracle_steps, at_step("oracle returned wrong degrees", k));
    if (!(apply_boundary(X, chain) == next - cur))
      return fail(out.oracle_steps,
                  at_step("oracle chain boundary mismatch", k));
    BigRat nn = l1(next);
    if (nn > a * cn)
      return fail(out.oracle_steps,
                  at_step("oracle decay bound violated: |c'| = " +
                              bigrat_str(nn) + " > a|c| = " + bigrat_str(a * cn),
                          k));
    BigRat bn = l1(chain);
    if (bn > x * cn)
      return fail(out.oracle_steps,
                  at_step("oracle cost bound violated: |chain| = " +
                              bigrat_str(bn) + " > x|c| = " + bigrat_str(x * cn),
                          k));

    TransportStep s;
    s.from = cur;
    s.to = next;
    s.chain = chain;
    s.cost = x;
    cert.steps.push_back(std::move(s));
    cur = std::move(next);
    ++out.oracle_steps;
  }

  refresh_certificate(cert);
  if (!cert.steps.empty()) out.filling = BigRat(-1) * cert.total_chain();
  out.filling_norm = l1(out.filling);
  out.certificate = std::move(cert);

  try {
    verify_transport(X, out.certificate);
  } catch (const std::exception& e) {
    out.ok = false;
    out.failure = std::string("certificate replay failed: ") + e.what();
    return out;
  }
  if (!(apply_boundary(X, out.filling) == alpha)) {
    out.ok = false;
    out.failure = "filling boundary does not match the input cycle";
    return out;
  }
  if (out.filling_norm > out.norm_bound) {
    out.ok = false;
    out.failure = "filling norm " + bigrat_str(out.filling_norm) +
                  " exceeds the certified bound " + bigrat_str(out.norm_bound);
    return out;
  }
  out.ok = true;
  return out;
}

BigRat hypercube_averaging_ratio(int deg) {
  if (deg < 3)
    throw std::invalid_argument("hypercube_averaging_ratio: deg >= 3");
  return BigRat(deg - 2) / BigRat(deg + 2);
}

StepOracle hypercube_averaging_oracle(const CellComplex& X, int deg) {
  if (deg < 3)
    throw std::invalid_argument("hypercube_averaging_oracle: deg >= 3");
  return [&X, deg](const Chain& c) {
    Chain b = (BigRat(-1) / BigRat(deg + 2)) * apply_coboundary(X, c);
    Chain next = c + apply_boundary(X, b);
    return std::make_pair(std::move(next), std::move(b));
  };
}

HypercubeWord make_hypercube_word(int deg, const std::vector<int>& coords) {
  if (deg < 1) throw std::invalid_argument("hypercube word: deg >= 1");
  HypercubeWord w;
  w.deg = deg;
  int v = 0;
  for (int k : coords) {
    if (k < 0 || k >= deg)
      throw std::invalid_argument("hypercube word: coordinate out of range");
    int sign = (v >> k & 1) ? -1 : 1;
    w.letters.push_back({k, sign});
    v ^= 1 << k;
  }
  if (v != 0) throw std::invalid_argument("hypercube word: does not close");
  return w;
}

HypercubeWord random_closed_word(int deg, int len, std::uint64_t seed) {
  if (len < 0 || len % 2)
    throw std::invalid_argument("random_closed_word: length must be even");
  Rng rng(seed);
  std::vector<int> coords;
  for (int t = 0; t < len / 2; ++t) {
    int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(deg)));
    coords.push_back(k);
    coords.push_back(k);
  }
  rng.shuffle(coords);
  return make_hypercube_word(deg, coords);
}

void validate_word(const HypercubeWord& w) {
  if (w.deg < 1) throw std::invalid_argument("hypercube word: deg >= 1");
  int v = 0;
  for (const auto& [k, sign] : w.letters) {
    if (k < 0 || k >= w.deg)
      throw std::invalid_argument("hypercube word: coordinate out of range");
    int expected = (v >> k & 1) ? -1 : 1;
    if (sign != expected)
      throw std::invalid_argument("hypercube word: sign does not match the walk");
    v ^= 1 << k;
  }
  if (v != 0) throw std::invalid_argument("hypercube word: does not close");
}

Chain hypercube_word_cycle(const CellComplex& X, const HypercubeWord& w) {
  validate_word(w);
  Chain out(1);
  int v = 0;
  for (const auto& [k, sign] : w.letters) {
    int base = v & ~(1 << k);
    int idx = X.cell_index(1, hypercube_cell_id(w.deg, base, {k}));
    if (idx < 0)
      throw std::invalid_argument("hypercube_word_cycle: edge missing from complex");
    out.add(idx, BigRat(sign));
    v ^= 1 << k;
  }
  return out;
}

ContractionResult hypercube_contract_word(const HypercubeWord& w) {
  validate_word(w);
  const int deg = w.deg;
  CellComplex X = hypercube_skeleton(deg, std::min(2, deg));

  ContractionResult out;
  out.word = w;
  out.cycle = hypercube_word_cycle(X, w);

  std::vector<HypercubeLetter> word = w.letters;
  Chain cur = out.cycle;
  TransportCertificate cert;

  auto edge_cell = [&](int vtx, int cd) {
    return X.cell_index(1, hypercube_cell_id(deg, vtx & ~(1 << cd), {cd}));
  };

  // Remove adjacent same-coordinate pairs; the traced cycle is unchanged
  // because the two letters cross the same edge in opposite directions.
  auto reduce = [&]() {
    std::vector<HypercubeLetter> stack;
    for (const auto& letter : word) {
      if (!stack.empty() && stack.back().coord == letter.coord) {
        stack.pop_back();
        ++out.cancellations;
      } else {
        stack.push_back(letter);
      }
    }
    word = std::move(stack);
  };

  // Swap positions t, t+1. The two orderings of the same pair of toggles
  // trace the two halves of one square, so the cycle moves by a signed
  // square boundary; the sign is fixed by matching against the incidence
  // column.
  auto do_swap = [&](int t) {
    int u = 0;
    for (int s = 0; s < t; ++s) u ^= 1 << word[s].coord;
    const int k = word[t].coord, sk = word[t].sign;
    const int l = word[t + 1].coord, sl = word[t + 1].sign;

    Chain delta(1);
    delta.add(edge_cell(u, l), BigRat(sl));
    delta.add(edge_cell(u ^ (1 << l), k), BigRat(sk));
    delta.add(edge_cell(u, k), BigRat(-sk));
    delta.add(edge_cell(u ^ (1 << k), l), BigRat(-sl));

    std::vector<int> span{std::min(k, l), std::max(k, l)};
    int base = u & ~(1 << k) & ~(1 << l);
    int fidx = X.cell_index(2, hypercube_cell_id(deg, base, span));
    if (fidx < 0) throw std::logic_error("contract: square cell missing");
    Chain face(2);
    face.set(fidx, BigRat(1));
    Chain bf = apply_boundary(X, face);

    BigRat g;
    if (delta == bf)
      g = BigRat(1);
    else if (delta == BigRat(-1) * bf)
      g = BigRat(-1);
    else
      throw std::logic_error("contract: square orientation mismatch");

    TransportStep s;
    s.from = cur;
    s.to = cur + delta;
    s.chain = Chain(2);
    s.chain.set(fidx, g);
    BigRat fn = l1(cur);
    s.cost = fn > 0 ? BigRat(1) / fn : BigRat(0);
    cur = s.to;
    cert.steps.push_back(std::move(s));
    std::swap(word[t], word[t + 1]);
    ++out.squares;
  };

  while (true) {
    reduce();
    if (word.empty() || cur.is_zero()) break;

    // A closed word repeats some coordinate within the first
    // min(deg+1, len) letters. Pick the pair whose second letter comes
    // first, nearest pair on ties; everything strictly between then has
    // other coordinates, so the swaps below are all legal commutations.
    int len = static_cast<int>(word.size());
    int win = std::min(deg + 1, len);
    int pi = -1, pj = -1;
    for (int j = 1; j < win && pj < 0; ++j)
      for (int i = j - 1; i >= 0; --i)
        if (word[i].coord == word[j].coord) {
          pi = i;
          pj = j;
          break;
        }
    if (pj < 0)
      throw std::logic_error("contract: closed word with no repeated "
                             "coordinate in the window");
    for (int t = pi; t < pj - 1; ++t) do_swap(t);
  }

  refresh_certificate(cert);
  out.filling = Chain(2);
  if (!cert.steps.empty()) out.filling = BigRat(-1) * cert.total_chain();
  out.certificate = std::move(cert);

  if (!(apply_boundary(X, out.filling) == out.cycle))
    throw std::logic_error("contract: filling boundary mismatch");
  if (!w.letters.empty())
    out.measured_constant =
        as_double(l1(out.filling)) /
        (static_cast<double>(deg) * static_cast<double>(w.letters.size()));
  out.complex = std::move(X);
  return out;
}

DecomposeResult hypercube_decompose(int deg, const Chain& c, const BigRat& tol) {
  if (deg < 3) throw std::invalid_argument("hypercube_decompose: deg >= 3");
  if (!(tol > 0)) throw std::invalid_argument("hypercube_decompose: tol > 0");
  if (c.dim() != 2)
    throw std::invalid_argument("hypercube_decompose: 2-chain expected");

  CellComplex X = hypercube_skeleton(deg, 3);
  (void)c.to_vector(X.n_cells(2));  // support bounds check

  DecomposeResult out;
  out.deg = deg;
  out.x = Chain(1);
  out.y = Chain(2);
  out.ratio_bound = BigRat(deg - 2) / BigRat(deg + 2);

  const BigRat s = BigRat(1) / BigRat(deg + 2);
  Chain cur = c;
  while (l1(cur) >= tol) {
    BigRat before = l1(cur);
    Chain xk = s * apply_boundary(X, cur);
    Chain bk = s * apply_coboundary(X, cur);
    Chain yk = apply_boundary(X, bk);
    Chain next = cur - apply_coboundary(X, xk) - yk;
    BigRat after = l1(next);
    if (after > out.ratio_bound * before)
      throw std::runtime_error(
          "hypercube_decompose: residual ratio exceeded (incidence bug)");
    out.x += xk;
    out.y += yk;
    out.rounds.push_back({std::move(xk), std::move(bk), before, after});
    cur = std::move(next);
  }
  out.residual = cur;

  Chain rec = apply_coboundary(X, out.x) + out.y + out.residual;
  if (!(rec == c))
    throw std::logic_error("hypercube_decompose: reconstruction drift");
  if (!apply_boundary(X, out.y).is_zero())
    throw std::logic_error("hypercube_decompose: closed part is not closed");

  BigRat cn = l1(c);
  if (cn > 0)
    out.measured_constant =
        as_double((l1(out.x) + l1(out.y)) / (BigRat(deg) * BigRat(deg) * cn));
  out.complex = std::move(X);
  return out;
}

void verify_decomposition(const Chain& c, const BigRat& tol,
                          const DecomposeResult& d) {
  const CellComplex& X = d.complex;
  const int deg = d.deg;
  if (deg < 3) throw std::runtime_error("decomposition: bad degree");
  const BigRat s = BigRat(1) / BigRat(deg + 2);
  const BigRat ratio = BigRat(deg - 2) / BigRat(deg + 2);

  Chain cur = c;
  Chain xs(1), ys(2);
  for (std::size_t k = 0; k < d.rounds.size(); ++k) {
    const DecomposeRound& r = d.rounds[k];
    if (l1(cur) != r.norm_before)
      throw std::runtime_error(at_step("recorded norm mismatch", k));
    if (!(r.x_part == s * apply_boundary(X, cur)))
      throw std::runtime_error(at_step("coexact primitive mismatch", k));
    if (!(r.b_part == s * apply_coboundary(X, cur)))
      throw std::runtime_error(at_step("closed primitive mismatch", k));
    Chain yk = apply_boundary(X, r.b_part);
    cur = cur - apply_coboundary(X, r.x_part) - yk;
    if (l1(cur) != r.norm_after)
      throw std::runtime_error(at_step("recorded residual norm mismatch", k));
    if (r.norm_after > ratio * r.norm_before)
      throw std::runtime_error(at_step("ratio bound violated", k));
    xs += r.x_part;
    ys += yk;
  }
  if (!(xs == d.x)) throw std::runtime_error("decomposition: x accumulator mismatch");
  if (!(ys == d.y)) throw std::runtime_error("decomposition: y accumulator mismatch");
  if (!(cur == d.residual))
    throw std::runtime_error("decomposition: residual mismatch");
  if (!(l1(cur) < tol))
    throw std::runtime_error("decomposition: residual above tolerance");
  if (!apply_boundary(X, d.y).is_zero())
    throw std::runtime_error("decomposition: closed part is not closed");
  Chain rec = apply_coboundary(X, d.x) + d.y + d.residual;
  if (!(rec == c))
    throw std::runtime_error("decomposition: reconstruction mismatch");
}

}  // namespace hdx
