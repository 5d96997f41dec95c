#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hdx/complex_io.hpp"
#include "hdx/constructors.hpp"
#include "hdx/cover.hpp"
#include "hdx/fibration.hpp"
#include "hdx/filling.hpp"
#include "hdx/homology.hpp"
#include "hdx/probe.hpp"
#include "hdx/spectral.hpp"
#include "hdx/surgery.hpp"
#include "hdx/transport.hpp"
#include "hdx/util.hpp"
#include "hdx/verify.hpp"

using namespace hdx;

namespace {

/** Flag misuse detected after CLI11 parsing; exits with code 2. */
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kSchemaVersion = 1;

double round_sig(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  double mag = std::pow(10.0, 11 - std::floor(std::log10(std::fabs(v))));
  return std::round(v * mag) / mag;
}

Lp parse_p(const std::string& s) {
  if (s == "1") return Lp::l1;
  if (s == "2") return Lp::l2;
  if (s == "inf") return Lp::linf;
  throw UsageError("--p must be 1, 2, or inf");
}

CheegerVariant parse_variant(const std::string& s) {
  if (s == "plain") return CheegerVariant::plain;
  if (s == "exact") return CheegerVariant::exact_only;
  if (s == "coexact") return CheegerVariant::coexact_only;
  throw UsageError("--variant must be plain, exact, or coexact");
}

CheegerMethod parse_method(const std::string& s) {
  if (s == "brute") return CheegerMethod::brute;
  if (s == "lp-enum") return CheegerMethod::lp_enum;
  if (s == "heuristic") return CheegerMethod::heuristic;
  throw UsageError("--method must be brute, lp-enum, or heuristic");
}

const char* variant_name(CheegerVariant v) {
  switch (v) {
    case CheegerVariant::plain: return "plain";
    case CheegerVariant::exact_only: return "exact";
    default: return "coexact";
  }
}

const char* method_name(CheegerMethod m) {
  switch (m) {
    case CheegerMethod::brute: return "brute";
    case CheegerMethod::lp_enum: return "lp-enum";
    default: return "heuristic";
  }
}

const char* p_name(Lp p) {
  switch (p) {
    case Lp::l1: return "1";
    case Lp::l2: return "2";
    default: return "inf";
  }
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::invalid_argument("cannot write " + out_path);
  f << text;
}

/** Exactly one of a file path and a catalog name picks the complex. */
CellComplex load_complex(const std::string& input, const std::string& name) {
  if (input.empty() == name.empty())
    throw UsageError("pass exactly one of --input and --name");
  CellComplex X = input.empty() ? named_complex(name) : read_complex_file(input);
  X.validate();
  return X;
}

Json stamp(Json j) {
  j["schema_version"] = kSchemaVersion;
  j["report_hash"] = report_hash(j);
  return j;
}

Json cheeger_value_json(const CheegerValue& cv, bool with_witness) {
  Json j{{"dim", cv.dim},
         {"side", cv.side == CheegerSide::down ? "down" : "up"},
         {"p", p_name(cv.p)},
         {"variant", variant_name(cv.variant)},
         {"method", method_name(cv.method)},
         {"infinite", cv.infinite},
         {"zero", cv.zero},
         {"is_upper_bound", cv.is_upper_bound},
         {"escalated", cv.escalated},
         {"cycles_enumerated", cv.cycles_enumerated},
         {"value_float", round_sig(cv.value_d)}};
  if (!cv.infinite && !cv.zero) {
    if (cv.p == Lp::l2)
      j["value_sq"] = bigrat_str(cv.value_sq);
    else
      j["value"] = bigrat_str(cv.value);
  }
  if (with_witness && !cv.infinite && !cv.zero) {
    j["witness_cycle"] = chain_to_json(cv.witness_cycle);
    j["witness_filling"] = chain_to_json(cv.witness_filling);
  }
  return j;
}

Json homology_json(const CellComplex& X) {
  Json arr = Json::array();
  for (const auto& hg : homology_all(X)) {
    Json torsion = Json::array();
    for (const auto& d : hg.torsion) torsion.push_back(d.str());
    arr.push_back(Json{{"dim", hg.dim},
                       {"betti", hg.betti},
                       {"torsion", torsion},
                       {"group", hg.str()}});
  }
  return arr;
}

// ---- analyze ------------------------------------------------------------

struct AnalyzeOpts {
  std::string input, name, output, format = "human", p = "1";
  int cap = 30;
  long long node_cap = 8000000;
  int spectral_cap = 400;
  bool full_spectrum = false;
};

int cmd_analyze(const AnalyzeOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  CellComplex X = load_complex(o.input, o.name);
  NormSpec ns{parse_p(o.p), {}};
  if (o.cap <= 0 || o.node_cap <= 0 || o.spectral_cap <= 0)
    throw UsageError("caps must be positive");

  Json j{{"complex", X.name()},
         {"input_hash", complex_hash(X)},
         {"euler_characteristic", X.euler_characteristic()},
         {"config", Json{{"p", o.p},
                         {"cap", o.cap},
                         {"node_cap", o.node_cap},
                         {"spectral_cap", o.spectral_cap},
                         {"zero_tol", 1e-9},
                         {"residual_tol", 1e-9}}}};
  j["homology"] = homology_json(X);

  Json spec = Json::array();
  for (int i = 0; i <= X.dims(); ++i) {
    if (X.n_cells(i) > o.spectral_cap) {
      spec.push_back(Json{{"dim", i}, {"skipped", "above eigensolver cap"}});
      continue;
    }
    spec.push_back(spectral_report_json(spectral_report(X, i), o.full_spectrum));
  }
  j["spectral"] = spec;

  CheegerOptions opts;
  opts.cell_cap = o.cap;
  opts.node_cap = o.node_cap;
  Json ch = Json::array();
  for (int i = 0; i < X.dims(); ++i) {
    if (X.n_cells(i) > o.cap) {
      ch.push_back(Json{{"dim", i}, {"skipped", "above enumeration cap"}});
      continue;
    }
    auto s0 = std::chrono::steady_clock::now();
    CheegerValue cv =
        cheeger_down(X, i, ns, CheegerVariant::plain, CheegerMethod::brute, opts);
    Json e = cheeger_value_json(cv, true);
    e["runtime_ms"] = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - s0)
                          .count();
    ch.push_back(e);
  }
  j["cheeger"] = ch;
  j["runtime_ms"] = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  j = stamp(j);

  if (o.format == "json") {
    emit(canonical_dump(j), o.output);
  } else if (o.format == "human") {
    std::ostringstream os;
    os << X.name() << ": chi = " << X.euler_characteristic() << "\n";
    for (const auto& hg : homology_all(X))
      os << "  H_" << hg.dim << " = " << hg.str() << "\n";
    for (const auto& e : j["cheeger"]) {
      os << "  dim " << e["dim"].get<int>() << ": ";
      if (e.contains("skipped"))
        os << e["skipped"].get<std::string>() << "\n";
      else
        os << "h = "
           << (e.contains("value") ? e["value"].get<std::string>()
                                   : std::to_string(e["value_float"].get<double>()))
           << (e["zero"].get<bool>() ? " (zero: homology)" : "")
           << (e["infinite"].get<bool>() ? " (no cycles)" : "") << "\n";
    }
    for (const auto& s : j["spectral"])
      if (!s.contains("skipped"))
        os << "  gap(Delta_" << s["dim"].get<int>()
           << ") = " << s["hodge_gap"].get<double>() << "\n";
    emit(os.str(), o.output);
  } else {
    throw UsageError("--format must be json or human");
  }
  return 0;
}

// ---- verify -------------------------------------------------------------

struct VerifyOpts {
  std::string suite = "all", output, format = "human";
};

int cmd_verify(const VerifyOpts& o) {
  std::vector<CheckResult> results;
  try {
    results = run_verify(o.suite);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.format == "json") {
    Json rows = Json::array();
    for (const auto& r : results)
      rows.push_back(Json{{"name", r.name},
                          {"suite", r.suite},
                          {"passed", r.passed},
                          {"detail", r.detail},
                          {"runtime_ms", r.runtime_ms}});
    Json j = stamp(Json{{"suite", o.suite}, {"checks", rows}});
    emit(canonical_dump(j), o.output);
  } else {
    emit(verify_report(results), o.output);
  }
  return all_passed(results) ? 0 : 1;
}

// ---- generate -----------------------------------------------------------

struct GenerateOpts {
  std::string name, output;
  int hypercube = -1, skeleton = -1, simplex = -1;
  int graph_n = -1, extra = 0, cone_n = -1;
  int random_n = -1, random_dim = 2;
  double prob = 0.5;
  std::uint64_t seed = 1;
  bool list = false;
};

int cmd_generate(const GenerateOpts& o) {
  if (o.list) {
    std::ostringstream os;
    for (const auto& n : named_complex_catalog()) os << n << "\n";
    emit(os.str(), o.output);
    return 0;
  }
  int picked = (!o.name.empty()) + (o.hypercube >= 0) + (o.simplex >= 0) +
               (o.graph_n >= 0) + (o.cone_n >= 0) + (o.random_n >= 0);
  if (picked != 1)
    throw UsageError(
        "pass exactly one of --name, --hypercube, --simplex, --random-graph, "
        "--cone, --random");
  CellComplex X;
  if (!o.name.empty()) {
    X = named_complex(o.name);
  } else if (o.hypercube >= 0) {
    int k = o.skeleton >= 0 ? o.skeleton : o.hypercube;
    X = hypercube_skeleton(o.hypercube, k);
  } else if (o.simplex >= 0) {
    X = simplex_boundary(o.simplex);
  } else if (o.graph_n >= 0) {
    X = random_connected_graph(o.graph_n, o.extra, o.seed);
  } else if (o.cone_n >= 0) {
    X = cone_over_random_graph(o.cone_n, o.extra, o.seed);
  } else {
    X = random_complex(o.random_n, o.random_dim, o.prob, o.seed);
  }
  X.validate();
  if (o.output.empty())
    emit(canonical_dump(complex_to_json(X)), "");
  else
    write_complex_file(o.output, X);
  return 0;
}

// ---- cheeger ------------------------------------------------------------

struct CheegerOpts {
  std::string input, name, output, format = "human";
  std::string p = "1", variant = "plain", method = "brute", side = "down";
  int dim = 0, cap = 30, samples = 200;
  long long node_cap = 8000000;
  std::uint64_t seed = 1;
  bool emit_certificate = false;
};

int cmd_cheeger(const CheegerOpts& o) {
  CellComplex X = load_complex(o.input, o.name);
  if (o.cap <= 0 || o.node_cap <= 0 || o.samples <= 0)
    throw UsageError("caps must be positive");
  if (o.dim < 0 || o.dim > X.dims())
    throw std::invalid_argument("--dim outside the complex's grading");
  NormSpec ns{parse_p(o.p), {}};
  CheegerOptions opts;
  opts.cell_cap = o.cap;
  opts.node_cap = o.node_cap;
  opts.samples = o.samples;
  opts.seed = o.seed;
  CheegerVariant variant = parse_variant(o.variant);
  CheegerMethod method = parse_method(o.method);

  auto t0 = std::chrono::steady_clock::now();
  CheegerValue cv;
  if (o.side == "down")
    cv = cheeger_down(X, o.dim, ns, variant, method, opts);
  else if (o.side == "up")
    cv = cheeger_up(X, o.dim, ns, variant, method, opts);
  else
    throw UsageError("--side must be down or up");

  bool witness_verified = false;
  if (method == CheegerMethod::brute && !cv.infinite && !cv.zero &&
      ns.p != Lp::l2) {
    const CellComplex ambient =
        o.side == "down" ? X : transpose_complex(X);
    int wdim = o.side == "down" ? o.dim : transpose_degree(X, o.dim);
    Chain cyc(wdim), fill(wdim + 1);
    for (const auto& [i, v] : cv.witness_cycle.coeffs()) cyc.set(i, v);
    for (const auto& [i, v] : cv.witness_filling.coeffs()) fill.set(i, v);
    if (apply_boundary(ambient, fill) != cyc)
      throw std::logic_error("witness filling does not bound the witness cycle");
    FillingResult mf = min_filling(ambient, cyc, ns);
    if (!mf.feasible || cv.value * mf.value != cyc.norm_exact(ns))
      throw std::logic_error("witness does not achieve the reported ratio");
    witness_verified = true;
  }

  Json j{{"complex", X.name()}, {"input_hash", complex_hash(X)}};
  j["result"] = cheeger_value_json(cv, o.emit_certificate);
  j["result"]["witness_verified"] = witness_verified;
  j["runtime_ms"] = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  j = stamp(j);
  if (o.format == "json")
    emit(canonical_dump(j), o.output);
  else
    emit(cv.str(), o.output);
  return 0;
}

// ---- fill ---------------------------------------------------------------

struct FillOpts {
  std::string input, name, chain, output, format = "human", p = "1";
};

int cmd_fill(const FillOpts& o) {
  CellComplex X = load_complex(o.input, o.name);
  if (o.chain.empty()) throw UsageError("--chain is required");
  Chain alpha = chain_from_json(Json::parse(slurp(o.chain)));
  NormSpec ns{parse_p(o.p), {}};
  FillingResult fr = min_filling(X, alpha, ns);
  if (fr.feasible) verify_filling(X, alpha, fr, ns);
  Json j{{"complex", X.name()},
         {"input_hash", complex_hash(X)},
         {"feasible", fr.feasible},
         {"escalated", fr.escalated},
         {"value_float", round_sig(fr.value_d)}};
  if (fr.feasible) {
    if (ns.p == Lp::l2)
      j["value_sq"] = bigrat_str(fr.value_sq);
    else
      j["value"] = bigrat_str(fr.value);
    j["witness"] = chain_to_json(fr.witness);
  }
  j = stamp(j);
  if (o.format == "json") {
    emit(canonical_dump(j), o.output);
  } else {
    std::ostringstream os;
    if (!fr.feasible)
      os << "not a boundary: no filling exists\n";
    else
      os << "minimal filling norm " << (ns.p == Lp::l2 ? std::to_string(fr.value_d)
                                                       : bigrat_str(fr.value))
         << " over " << fr.witness.support_size() << " cells\n";
    emit(os.str(), o.output);
  }
  return 0;
}

// ---- homology -----------------------------------------------------------

struct HomologyOpts {
  std::string input, name, output, format = "human";
};

int cmd_homology(const HomologyOpts& o) {
  CellComplex X = load_complex(o.input, o.name);
  Json j = stamp(Json{{"complex", X.name()},
                      {"input_hash", complex_hash(X)},
                      {"euler_characteristic", X.euler_characteristic()},
                      {"homology", homology_json(X)}});
  if (o.format == "json") {
    emit(canonical_dump(j), o.output);
  } else {
    std::ostringstream os;
    for (const auto& hg : homology_all(X))
      os << "H_" << hg.dim << "(" << X.name() << ") = " << hg.str() << "\n";
    emit(os.str(), o.output);
  }
  return 0;
}

// ---- cover --------------------------------------------------------------

struct CoverOpts {
  std::string input, name, output, format = "human", write_total;
};

int cmd_cover(const CoverOpts& o) {
  CellComplex X = load_complex(o.input, o.name);
  CoverComplex cc = universal_abelian_cover(X);
  verify_cover(cc);
  Json factors = Json::array();
  for (long long f : cc.group.factors) factors.push_back(f);
  Json j{{"complex", X.name()},
         {"input_hash", complex_hash(X)},
         {"sheets", cc.sheets()},
         {"group_factors", factors},
         {"base_cells", X.total_cells()},
         {"total_cells", cc.total.total_cells()},
         {"euler_base", X.euler_characteristic()},
         {"euler_total", cc.total.euler_characteristic()},
         {"diameter_base", X.graph_diameter()},
         {"diameter_total", cc.total.graph_diameter()},
         {"total_hash", complex_hash(cc.total)},
         {"verified", true}};
  j = stamp(j);
  if (!o.write_total.empty()) write_complex_file(o.write_total, cc.total);
  if (o.format == "json") {
    emit(canonical_dump(j), o.output);
  } else {
    std::ostringstream os;
    os << X.name() << ": " << cc.sheets() << "-sheeted abelian cover, "
       << X.total_cells() << " -> " << cc.total.total_cells() << " cells, "
       << "diameter " << X.graph_diameter() << " -> "
       << cc.total.graph_diameter() << "\n";
    emit(os.str(), o.output);
  }
  return 0;
}

// ---- surgery ------------------------------------------------------------

struct SurgeryOpts {
  std::string matrix, output, format = "human", q_range, meridian;
  long long q = 0;
  bool has_q = false;
};

FramedLink load_link(const std::string& path) {
  if (path.empty()) throw UsageError("--matrix is required");
  std::string text = slurp(path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return link_from_json(Json::parse(text));
  return link_from_csv(text);
}

int cmd_surgery(const SurgeryOpts& o) {
  FramedLink link = load_link(o.matrix);
  if (o.has_q == !o.q_range.empty())
    throw UsageError("pass exactly one of --q and --q-range");

  if (!o.q_range.empty()) {
    auto colon = o.q_range.find(':');
    if (colon == std::string::npos)
      throw UsageError("--q-range must look like lo:hi");
    long long lo = 0, hi = 0;
    try {
      lo = std::stoll(o.q_range.substr(0, colon));
      hi = std::stoll(o.q_range.substr(colon + 1));
    } catch (const std::exception&) {
      throw UsageError("--q-range must look like lo:hi");
    }
    auto rows = torsion_growth_table(link, lo, hi);
    if (o.format == "csv") {
      emit(growth_table_to_csv(rows), o.output);
    } else if (o.format == "json") {
      Json j = stamp(Json{{"min_dominant_slope", min_dominant_slope(link)},
                          {"rows", growth_table_to_json(rows)}});
      emit(canonical_dump(j), o.output);
    } else {
      std::ostringstream os;
      for (const auto& r : rows)
        os << "q = " << r.q << ": |H_1| = "
           << (r.rational_homology_sphere ? r.h1_order.str() : "infinite")
           << "\n";
      emit(os.str(), o.output);
    }
    return 0;
  }

  HomologyGroup hg = surgery_h1(link, o.q);
  Json j{{"q", o.q},
         {"h1", hg.str()},
         {"h1_order", surgery_h1_order(link, o.q).str()},
         {"rational_homology_sphere", hg.betti == 0},
         {"min_dominant_slope", min_dominant_slope(link)}};
  if (!o.meridian.empty()) {
    std::vector<BigRat> a;
    std::stringstream ss(o.meridian);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        a.push_back(BigRat(std::stoll(tok)));
      } catch (const std::exception&) {
        throw UsageError("--meridian must be a comma-separated integer vector");
      }
    }
    MeridianResult mr = meridian_contraction(link, o.q, a);
    j["meridian"] = Json{
        {"factor_bound", bigrat_str(mr.certificate.factor_bound)},
        {"max_observed_ratio", bigrat_str(mr.certificate.max_observed_ratio)},
        {"paper_halving", mr.certificate.paper_halving},
        {"contracting", mr.certificate.contracting},
        {"converged", mr.certificate.converged},
        {"steps", mr.certificate.steps}};
  }
  j = stamp(j);
  if (o.format == "json") {
    emit(canonical_dump(j), o.output);
  } else {
    std::ostringstream os;
    os << "H_1 after slope-" << o.q << " surgery: " << hg.str() << "\n";
    if (j.contains("meridian"))
      os << "meridian factor bound "
         << j["meridian"]["factor_bound"].get<std::string>() << ", "
         << (j["meridian"]["converged"].get<bool>() ? "converged"
                                                    : "did not converge")
         << "\n";
    emit(os.str(), o.output);
  }
  return 0;
}

// ---- probe --------------------------------------------------------------

struct ProbeOpts {
  std::string input, name, output, format = "human";
};

int cmd_probe(const ProbeOpts& o) {
  CellComplex X = load_complex(o.input, o.name);
  ProbeReport r = chain_contraction_probe(X);
  if (o.format == "json") {
    Json rows = Json::array();
    for (const auto& row : r.rows)
      rows.push_back(Json{{"cell", row.cell},
                          {"k", bigrat_str(row.k)},
                          {"z_norm", bigrat_str(row.z_norm)},
                          {"h_norm", bigrat_str(row.h_norm)}});
    Json j = stamp(Json{{"complex", r.complex_name},
                        {"input_hash", complex_hash(X)},
                        {"h1", r.h1.str()},
                        {"torsion_lcm", r.torsion_lcm.str()},
                        {"k_sum", bigrat_str(r.k_sum)},
                        {"max_h0_norm", bigrat_str(r.max_h0_norm)},
                        {"max_h1_norm", bigrat_str(r.max_h1_norm)},
                        {"max_h2_norm", bigrat_str(r.max_h2_norm)},
                        {"h_denominator_lcm", r.h_denominator_lcm.str()},
                        {"min_nonzero_z_norm", bigrat_str(r.min_nonzero_z_norm)},
                        {"norm_floor", bigrat_str(r.norm_floor)},
                        {"partial", r.partial},
                        {"partial_reason", r.partial_reason},
                        {"rows", rows}});
    emit(canonical_dump(j), o.output);
  } else {
    emit(r.str(), o.output);
  }
  return 0;
}

// ---- hypercube ----------------------------------------------------------

struct ContractOpts {
  std::string output, format = "human";
  int deg = 4, len = 12;
  std::uint64_t seed = 1;
  bool emit_certificate = false;
};

int cmd_contract(const ContractOpts& o) {
  if (o.deg < 2 || o.len < 0 || o.len % 2 != 0)
    throw UsageError("--deg must be >= 2 and --len even and nonnegative");
  HypercubeWord w = random_closed_word(o.deg, o.len, o.seed);
  ContractionResult cr = hypercube_contract_word(w);
  verify_transport(cr.complex, cr.certificate);
  Json j{{"deg", o.deg},
         {"len", o.len},
         {"seed", o.seed},
         {"squares", cr.squares},
         {"cancellations", cr.cancellations},
         {"cycle_norm", bigrat_str(cr.cycle.norm_exact(NormSpec::l1()))},
         {"filling_norm", bigrat_str(cr.filling.norm_exact(NormSpec::l1()))},
         {"measured_constant", round_sig(cr.measured_constant)},
         {"certificate_steps", cr.certificate.steps.size()},
         {"certificate_verified", true}};
  if (o.emit_certificate) {
    Json steps = Json::array();
    for (const auto& s : cr.certificate.steps)
      steps.push_back(Json{{"from", chain_to_json(s.from)},
                           {"to", chain_to_json(s.to)},
                           {"chain", chain_to_json(s.chain)},
                           {"cost", bigrat_str(s.cost)}});
    j["certificate"] = Json{{"steps", steps},
                            {"total_cost", bigrat_str(cr.certificate.total_cost)}};
    j["filling"] = chain_to_json(cr.filling);
  }
  j = stamp(j);
  if (o.format == "json") {
    emit(canonical_dump(j), o.output);
  } else {
    std::ostringstream os;
    os << "contracted a length-" << o.len << " word on the " << o.deg
       << "-cube: " << cr.squares << " squares, filling norm "
       << bigrat_str(cr.filling.norm_exact(NormSpec::l1()))
       << ", certificate verified\n";
    emit(os.str(), o.output);
  }
  return 0;
}

struct DecomposeOpts {
  std::string output, format = "human";
  int deg = 4, cells = 4;
  std::uint64_t seed = 1;
  long long tol_den = 1000000000;
};

int cmd_decompose(const DecomposeOpts& o) {
  if (o.deg < 3 || o.cells <= 0 || o.tol_den <= 0)
    throw UsageError("--deg must be >= 3, --cells and --tol-den positive");
  CellComplex X = hypercube_skeleton(o.deg, 3);
  Rng rng(o.seed);
  Chain c(2);
  for (int k = 0; k < o.cells; ++k)
    c.set(static_cast<int>(rng.below(X.n_cells(2))),
          BigRat(rng.range(1, 3), 1));
  DecomposeResult dr = hypercube_decompose(o.deg, c, BigRat(1, o.tol_den));
  Chain back = apply_coboundary(dr.complex, dr.x) + dr.y + dr.residual;
  if (back != c)
    throw std::logic_error("decomposition failed to reassemble the input");
  Json j = stamp(Json{
      {"deg", o.deg},
      {"seed", o.seed},
      {"rounds", dr.rounds.size()},
      {"ratio_bound", bigrat_str(dr.ratio_bound)},
      {"input_norm", bigrat_str(c.norm_exact(NormSpec::l1()))},
      {"x_norm", bigrat_str(dr.x.norm_exact(NormSpec::l1()))},
      {"y_norm", bigrat_str(dr.y.norm_exact(NormSpec::l1()))},
      {"residual_norm", bigrat_str(dr.residual.norm_exact(NormSpec::l1()))},
      {"reconstruction_ok", true},
      {"measured_constant", round_sig(dr.measured_constant)}});
  if (o.format == "json") {
    emit(canonical_dump(j), o.output);
  } else {
    std::ostringstream os;
    os << "decomposed a 2-chain on the " << o.deg << "-cube in "
       << dr.rounds.size() << " rounds (ratio bound "
       << bigrat_str(dr.ratio_bound) << "), residual "
       << bigrat_str(dr.residual.norm_exact(NormSpec::l1())) << "\n";
    emit(os.str(), o.output);
  }
  return 0;
}

void read_thread_env() {
  const char* v = std::getenv("HDX_THREADS");
  if (v == nullptr) return;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (end == v || *end != '\0' || n < 1)
    throw UsageError("HDX_THREADS must be a positive integer");
  // Checks run sequentially in this build; the value only caps future use.
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"expansion invariants of finite polyhedral complexes"};
  app.require_subcommand(1);

  AnalyzeOpts an;
  auto* analyze = app.add_subcommand(
      "analyze", "homology, spectral gaps, and Cheeger constants of a complex");
  analyze->add_option("--input", an.input, "complex JSON file");
  analyze->add_option("--name", an.name, "built-in complex name");
  analyze->add_option("--p", an.p, "norm exponent: 1, 2, or inf");
  analyze->add_option("--cap", an.cap, "brute enumeration cell cap");
  analyze->add_option("--node-cap", an.node_cap, "brute enumeration node cap");
  analyze->add_option("--spectral-cap", an.spectral_cap,
                      "eigensolver size threshold");
  analyze->add_flag("--full-spectrum", an.full_spectrum,
                    "include every eigenvalue in the report");
  analyze->add_option("--format", an.format, "json or human");
  analyze->add_option("--output", an.output, "write to a file instead of stdout");

  VerifyOpts ve;
  auto* verify = app.add_subcommand("verify", "run the built-in self checks");
  verify->add_option("--suite", ve.suite,
                     "all, spectral, filling, transport, homology, surgery, "
                     "or fibration");
  verify->add_option("--format", ve.format, "json or human");
  verify->add_option("--output", ve.output, "write to a file instead of stdout");

  GenerateOpts ge;
  auto* generate = app.add_subcommand("generate", "emit a complex as JSON");
  generate->add_option("--name", ge.name, "built-in complex name");
  generate->add_flag("--list", ge.list, "print the catalog of built-in names");
  generate->add_option("--hypercube", ge.hypercube, "hypercube degree");
  generate->add_option("--skeleton", ge.skeleton, "skeleton dimension to keep");
  generate->add_option("--simplex", ge.simplex, "boundary of the n-simplex");
  generate->add_option("--random-graph", ge.graph_n,
                       "seeded connected graph on n vertices");
  generate->add_option("--cone", ge.cone_n, "cone over a seeded graph");
  generate->add_option("--extra", ge.extra, "extra edges for graph generators");
  generate->add_option("--random", ge.random_n, "seeded random complex size");
  generate->add_option("--dim", ge.random_dim, "random complex dimension");
  generate->add_option("--prob", ge.prob, "top-cell probability");
  generate->add_option("--seed", ge.seed, "generator seed");
  generate->add_option("--output", ge.output, "write to a file instead of stdout");

  CheegerOpts chg;
  auto* cheeger = app.add_subcommand("cheeger", "one Cheeger constant");
  cheeger->add_option("--input", chg.input, "complex JSON file");
  cheeger->add_option("--name", chg.name, "built-in complex name");
  cheeger->add_option("--dim", chg.dim, "chain degree i");
  cheeger->add_option("--p", chg.p, "norm exponent: 1, 2, or inf");
  cheeger->add_option("--variant", chg.variant, "plain, exact, or coexact");
  cheeger->add_option("--method", chg.method, "brute, lp-enum, or heuristic");
  cheeger->add_option("--side", chg.side, "down (h_i) or up (h^i)");
  cheeger->add_option("--cap", chg.cap, "brute enumeration cell cap");
  cheeger->add_option("--node-cap", chg.node_cap, "brute enumeration node cap");
  cheeger->add_option("--samples", chg.samples, "heuristic sample count");
  cheeger->add_option("--seed", chg.seed, "heuristic sampling seed");
  cheeger->add_flag("--emit-certificate", chg.emit_certificate,
                    "embed the witness cycle and filling");
  cheeger->add_option("--format", chg.format, "json or human");
  cheeger->add_option("--output", chg.output, "write to a file instead of stdout");

  FillOpts fi;
  auto* fill = app.add_subcommand("fill", "minimal filling of a chain");
  fill->add_option("--input", fi.input, "complex JSON file");
  fill->add_option("--name", fi.name, "built-in complex name");
  fill->add_option("--chain", fi.chain, "chain JSON file");
  fill->add_option("--p", fi.p, "norm exponent: 1, 2, or inf");
  fill->add_option("--format", fi.format, "json or human");
  fill->add_option("--output", fi.output, "write to a file instead of stdout");

  HomologyOpts ho;
  auto* homology = app.add_subcommand("homology", "integral homology");
  homology->add_option("--input", ho.input, "complex JSON file");
  homology->add_option("--name", ho.name, "built-in complex name");
  homology->add_option("--format", ho.format, "json or human");
  homology->add_option("--output", ho.output, "write to a file instead of stdout");

  CoverOpts co;
  auto* cover = app.add_subcommand("cover", "universal abelian cover");
  cover->add_option("--input", co.input, "complex JSON file");
  cover->add_option("--name", co.name, "built-in complex name");
  cover->add_option("--write-total", co.write_total,
                    "write the covering complex to a file");
  cover->add_option("--format", co.format, "json or human");
  cover->add_option("--output", co.output, "write to a file instead of stdout");

  SurgeryOpts su;
  auto* surgery = app.add_subcommand("surgery", "linking-matrix surgery H_1");
  surgery->add_option("--matrix", su.matrix, "linking matrix (.csv or .json)");
  auto* qopt = surgery->add_option("--q", su.q, "single surgery slope");
  surgery->add_option("--q-range", su.q_range, "slope range lo:hi");
  surgery->add_option("--meridian", su.meridian,
                      "meridian start vector, comma-separated integers");
  surgery->add_option("--format", su.format, "json, csv, or human");
  surgery->add_option("--output", su.output, "write to a file instead of stdout");

  ProbeOpts pr;
  auto* probe = app.add_subcommand(
      "probe", "chain contraction probe of a rational homology 3-sphere");
  probe->add_option("--input", pr.input, "complex JSON file");
  probe->add_option("--name", pr.name, "built-in complex name");
  probe->add_option("--format", pr.format, "json or human");
  probe->add_option("--output", pr.output, "write to a file instead of stdout");

  auto* hyper = app.add_subcommand("hypercube", "hypercube filling algorithms");
  hyper->require_subcommand(1);
  ContractOpts ct;
  auto* contract =
      hyper->add_subcommand("contract", "contract a random closed word");
  contract->add_option("--deg", ct.deg, "cube degree");
  contract->add_option("--len", ct.len, "word length (even)");
  contract->add_option("--seed", ct.seed, "word seed");
  contract->add_flag("--emit-certificate", ct.emit_certificate,
                     "embed the full transport certificate");
  contract->add_option("--format", ct.format, "json or human");
  contract->add_option("--output", ct.output, "write to a file instead of stdout");
  DecomposeOpts de;
  auto* decompose =
      hyper->add_subcommand("decompose", "averaging decomposition of a 2-chain");
  decompose->add_option("--deg", de.deg, "cube degree (>= 3)");
  decompose->add_option("--cells", de.cells, "support size of the random chain");
  decompose->add_option("--seed", de.seed, "chain seed");
  decompose->add_option("--tol-den", de.tol_den,
                        "stop when the residual drops below 1/tol-den");
  decompose->add_option("--format", de.format, "json or human");
  decompose->add_option("--output", de.output, "write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  su.has_q = qopt->count() > 0;

  try {
    read_thread_env();
    if (app.got_subcommand(analyze)) return cmd_analyze(an);
    if (app.got_subcommand(verify)) return cmd_verify(ve);
    if (app.got_subcommand(generate)) return cmd_generate(ge);
    if (app.got_subcommand(cheeger)) return cmd_cheeger(chg);
    if (app.got_subcommand(fill)) return cmd_fill(fi);
    if (app.got_subcommand(homology)) return cmd_homology(ho);
    if (app.got_subcommand(cover)) return cmd_cover(co);
    if (app.got_subcommand(surgery)) return cmd_surgery(su);
    if (app.got_subcommand(probe)) return cmd_probe(pr);
    if (hyper->got_subcommand(contract)) return cmd_contract(ct);
    if (hyper->got_subcommand(decompose)) return cmd_decompose(de);
    throw UsageError("no subcommand");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceeded& e) {
    std::cerr << "input too large: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const std::logic_error& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  }
}
