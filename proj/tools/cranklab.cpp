// cranklab: command-line front end to the crank dissection library.
#include <chrono>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cranklab/dissection.hpp"
#include "cranklab/identity_io.hpp"
#include "cranklab/partitions.hpp"
#include "cranklab/verifier.hpp"

using namespace cranklab;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kRefuted = 1;
constexpr int kUsage = 2;
constexpr long kMaxOrder = 500;

struct Options {
  int p = 0;
  int m = 0;
  long ell = 1;
  long order = 0;
  long max_n = 30;
  bool json = false;
  bool timing = false;
  bool prune = false;
  std::string convention = "series";
  std::string method = "both";
  std::string spec;
  std::string matrix;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ojson cyc(const CycNum& c) { return ojson::parse(cycnum_json(c)); }

void require_prime(int p) {
  if (p < 5) throw UsageError("--p must be a prime >= 5");
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) throw UsageError("--p must be a prime >= 5");
}

long order_or(const Options& o, long dflt) {
  long n = o.order > 0 ? o.order : dflt;
  if (n > kMaxOrder) throw UsageError("--order above " + std::to_string(kMaxOrder));
  return n;
}

void emit(const Options& o, ojson report, const std::string& text,
          std::chrono::steady_clock::time_point t0) {
  if (o.json) {
    if (o.timing)
      report["timing_ms"] =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

IdentityFile load_spec(const Options& o) {
  if (o.spec.empty()) throw UsageError("--spec is required");
  return load_identity_file(o.spec);
}

// ---------------------------------------------------------------- commands

int cmd_series(const Options& o) {
  auto t0 = std::chrono::steady_clock::now();
  require_prime(o.p);
  long n = order_or(o, 30);
  QSeries C = crank_series(o.p, o.ell, n);
  ojson r{{"command", "series"}, {"inputs", {{"p", o.p}, {"ell", o.ell}, {"order", n}}}, {"outcome", "ok"}};
  ojson terms = ojson::array();
  for (const auto& [e, c] : C.terms()) terms.push_back({{"e", rat_str(C.exponent(e))}, {"coeff", cyc(c)}});
  r["artifacts"] = {{"series", terms}};
  emit(o, r, qs_dump(C), t0);
  return 0;
}

int cmd_crank_table(const Options& o) {
  require_prime(o.p);
  if (o.max_n < 0) throw UsageError("--max-n must be non-negative");
  CrankConvention conv;
  if (o.convention == "series") conv = CrankConvention::Series;
  else if (o.convention == "comb") conv = CrankConvention::Combinatorial;
  else throw UsageError("--convention must be series or comb");
  if (conv == CrankConvention::Combinatorial && o.max_n > 75)
    throw UsageError("--convention comb enumerates partitions; use --max-n <= 75");
  CrankTable T = crank_table(o.p, static_cast<int>(o.max_n), conv);
  std::cout << "n";
  for (int k = 0; k < o.p; ++k) std::cout << ",M" << k;
  std::cout << "\n";
  for (int n = 0; n <= T.max_n(); ++n) {
    std::cout << n;
    for (int k = 0; k < o.p; ++k) std::cout << "," << T.at(k, n).get_str();
    std::cout << "\n";
  }
  return 0;
}

int cmd_dissect(const Options& o) {
  auto t0 = std::chrono::steady_clock::now();
  require_prime(o.p);
  if (o.m < 0 || o.m >= o.p) throw UsageError("--m must lie in 0..p-1");
  if (o.method != "comb" && o.method != "modular" && o.method != "both")
    throw UsageError("--method must be comb, modular or both");
  long n = order_or(o, 30);
  std::optional<DissectionElement> a, b;
  if (o.method != "modular") a = K_combinatorial(o.p, o.m, o.ell, n);
  if (o.method != "comb") b = K_modular(o.p, o.m, o.ell, n);
  const QSeries& shown = a ? a->series : b->series;
  ojson r{{"command", "dissect"},
          {"inputs", {{"p", o.p}, {"m", o.m}, {"ell", o.ell}, {"order", n}, {"method", o.method}}}};
  std::string text = qs_dump(shown);
  int rc = 0;
  if (a && b) {
    auto diff = qs_first_difference(a->series, b->series, Rat(n));
    r["outcome"] = diff ? "disagree" : "agree";
    r["artifacts"]["first_difference"] = diff ? ojson(rat_str(*diff)) : ojson(nullptr);
    text += diff ? "# constructions differ at q^" + rat_str(*diff) + "\n"
                 : "# combinatorial and modular constructions agree below q^" + std::to_string(n) + "\n";
    if (diff) rc = kRefuted;
  } else {
    r["outcome"] = "ok";
  }
  ojson terms = ojson::array();
  for (const auto& [e, c] : shown.terms()) terms.push_back({{"e", rat_str(shown.exponent(e))}, {"coeff", cyc(c)}});
  r["artifacts"]["series"] = terms;
  emit(o, r, text, t0);
  return rc;
}

int cmd_cusp_orders(const Options& o) {
  auto t0 = std::chrono::steady_clock::now();
  IdentityFile f = load_spec(o);
  ojson r{{"command", "cusp-orders"}, {"inputs", {{"spec", o.spec}}}, {"outcome", "ok"}};
  ojson tables = ojson::array();
  std::string text;
  for (const auto& s : f.identities) {
    if (o.p && s.p != o.p) continue;
    OrdTable T = ord_table(s);
    ojson t = ojson::parse(ord_table_json(T));
    t["name"] = s.name;
    tables.push_back(t);
    text += "# " + s.name + "\n" + ord_table_text(T) + "\n";
  }
  r["artifacts"] = {{"tables", tables}};
  emit(o, r, text, t0);
  return 0;
}

std::string certificate_text(const ValenceCertificate& c) {
  std::ostringstream os;
  os << "# " << c.name << "  p=" << c.p << " m=" << c.m << "\n";
  os << "weight " << rat_str(c.weight) << ", index " << c.index << ", target " << rat_str(c.target) << "\n";
  if (c.j0) os << "divided by term " << *c.j0 << " (order " << rat_str(c.j0_order) << " at i*inf)\n";
  os << "cusp      width  LHS bound  ceil  RHS min  bound\n";
  for (const auto& b : c.cusps) {
    os << std::left << std::setw(10) << b.cusp.str() << std::right << std::setw(5) << b.width << std::setw(11)
       << rat_str(b.lhs_exact) << std::setw(6) << b.lhs.get_str() << std::setw(9)
       << (b.rhs ? rat_str(*b.rhs) : "-") << std::setw(7) << b.bound.get_str() << "\n";
  }
  os << "B = " << c.B.get_str() << ", required ORD at i*inf >= " << c.required.get_str() << "\n";
  os << "LHS - RHS checked below q^" << rat_str(c.checked_to) << ": ";
  if (c.verified) os << "vanishes below q^" << rat_str(c.vanish_below) << ", verified\n";
  else os << "nonzero at q^" << rat_str(*c.first_nonzero) << ", REFUTED\n";
  return os.str();
}

int cmd_verify(const Options& o) {
  auto t0 = std::chrono::steady_clock::now();
  IdentityFile f = load_spec(o);
  long margin = o.order > 0 ? order_or(o, 20) : 20;
  ojson r{{"command", "verify"}, {"inputs", {{"spec", o.spec}, {"margin", margin}}}};
  ojson certs = ojson::array();
  std::string text;
  bool all = true;
  for (const auto& s : f.identities) {
    ojson mod = ojson::array();
    bool modular = true;
    for (const auto& t : s.terms) {
      EtaVector v = fold_term(s, t);
      auto mc = modularity_check(s.p, s.m, v);
      modular = modular && mc.pass;
      mod.push_back({{"folded", v.n}, {"weight_sum", mc.weight_sum}, {"mod24", mc.mod24},
                     {"quad", mc.quad}, {"pass", mc.pass}});
    }
    ValenceCertificate c = valence_certificate(s, margin);
    ojson cj = ojson::parse(certificate_json(c));
    cj["modularity"] = mod;
    cj["verified"] = c.verified && modular;
    certs.push_back(cj);
    text += certificate_text(c);
    if (!modular) text += "a term fails the modularity conditions\n";
    text += "\n";
    all = all && c.verified && modular;
  }
  ojson series = ojson::array();
  for (const auto& s : f.series) {
    long n = order_or(o, 50);
    SeriesCheck chk = check_series_identity(s, Rat(n));
    series.push_back({{"name", s.name}, {"order", n},
                      {"first_difference", chk.first_difference ? ojson(rat_str(*chk.first_difference)) : ojson(nullptr)},
                      {"verified", chk.verified()}});
    text += "# " + s.name + "\n" +
            (chk.verified() ? "series identity holds below q^" + std::to_string(n) + "\n"
                            : "series differ at q^" + rat_str(*chk.first_difference) + ", REFUTED\n") +
            "\n";
    all = all && chk.verified();
  }
  r["outcome"] = all ? "verified" : "refuted";
  r["artifacts"] = {{"certificates", certs}, {"series", series}};
  emit(o, r, text, t0);
  return all ? 0 : kRefuted;
}

int cmd_prove_crank_theorem(const Options& o) {
  auto t0 = std::chrono::steady_clock::now();
  if (o.p != 5 && o.p != 7 && o.p != 11) throw UsageError("--p must be 5, 7 or 11");
  IdentitySpec s;
  s.name = "K_{" + std::to_string(o.p) + ",0}";
  s.p = o.p;
  s.m = 0;
  ValenceCertificate c = valence_certificate(s, o.order > 0 ? order_or(o, 20) : 20);
  std::string verdict = c.verified ? "K_{" + std::to_string(o.p) + ",0} = 0" : "not proved";
  ojson r{{"command", "prove-crank-theorem"}, {"inputs", {{"p", o.p}}},
          {"outcome", c.verified ? "verified" : "refuted"}, {"verdict", verdict}};
  r["artifacts"] = {{"certificate", ojson::parse(certificate_json(c))}};
  emit(o, r, certificate_text(c) + "verdict: " + verdict + "\n", t0);
  return c.verified ? 0 : kRefuted;
}

Matrix2 parse_matrix(const std::string& s) {
  std::vector<long> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      v.push_back(std::stol(tok));
    } catch (...) {
      throw UsageError("--matrix expects a,b,c,d");
    }
  }
  if (v.size() != 4) throw UsageError("--matrix expects a,b,c,d");
  try {
    return Matrix2(v[0], v[1], v[2], v[3]);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--matrix: ") + e.what());
  }
}

const IdentitySpec* find_m(const IdentityFile& f, int p, long m) {
  for (const auto& s : f.identities)
    if (s.p == p && s.m == m) return &s;
  return nullptr;
}

int cmd_check_symmetry(const Options& o) {
  auto t0 = std::chrono::steady_clock::now();
  IdentityFile f = load_spec(o);
  if (!o.matrix.empty()) {
    Matrix2 A = parse_matrix(o.matrix);
    if (f.identities.empty()) throw UsageError("no identities in " + o.spec);
    int p = o.p ? o.p : f.identities.front().p;
    if (A.c != p) throw UsageError("--matrix must have lower-left entry p");
    const IdentitySpec* src = find_m(f, p, o.m);
    if (!src) throw UsageError("no identity for m = " + std::to_string(o.m));
    long a = mod_floor(A.a, Int(p)).get_si();
    long mi = mod_floor(static_cast<long>(o.m) * a * a, static_cast<long>(p));
    const IdentitySpec* img = find_m(f, p, mi);
    if (!img) throw UsageError("no identity for the image m = " + std::to_string(mi));
    Gamma0Report g = gamma0_symmetry_check(*src, *img, A);
    ojson r{{"command", "check-symmetry"},
            {"inputs", {{"spec", o.spec}, {"p", p}, {"m", o.m}, {"matrix", A.str()}}},
            {"outcome", g.verified ? "verified" : "refuted"}};
    r["artifacts"] = {{"m_image", g.m_image},
                      {"d", g.d},
                      {"expected", cyc(g.expected)},
                      {"observed", g.observed ? cyc(*g.observed) : ojson(nullptr)},
                      {"targets_match", g.targets_match}};
    std::ostringstream os;
    os << "K_{" << p << "," << o.m << "}(zeta) | A  with A = " << A.str() << "\n";
    os << "image K_{" << p << "," << g.m_image << "}(zeta^" << g.d << ")\n";
    os << "expected multiplier " << g.expected.str() << "  ~ " << g.expected.embed() << "\n";
    if (g.observed) os << "observed multiplier " << g.observed->str() << "  ~ " << g.observed->embed() << "\n";
    else os << "transformed right side is not a multiple of the image\n";
    os << (g.verified ? "verified\n" : "REFUTED\n");
    emit(o, r, os.str(), t0);
    return g.verified ? 0 : kRefuted;
  }
  ojson reports = ojson::array();
  std::string text;
  bool all = true;
  for (const auto& s : f.identities) {
    if (s.m != 0) continue;
    SymmetryReport rep = symmetry_check_K0(s, Rat(order_or(o, 60)));
    ojson signs = ojson::array();
    text += "# " + s.name + (rep.independent ? "" : ": j-functions are linearly dependent, refusing") + "\n";
    for (const auto& g : rep.signs) {
      signs.push_back({{"r", g.r}, {"vector", g.vector_index}, {"k", g.k}, {"w", g.w}, {"w_formula", g.w_formula}});
      text += "r=" + std::to_string(g.r) + " vector " + std::to_string(g.vector_index) + " k=" +
              std::to_string(g.k) + "  w=" + (g.w > 0 ? "+1" : g.w < 0 ? "-1" : "none") +
              "  L-formula " + (g.w_formula > 0 ? "+1" : "-1") + "\n";
    }
    reports.push_back({{"name", s.name}, {"independent", rep.independent}, {"rank", rep.rank},
                       {"signs", signs}, {"consistent", rep.consistent()}});
    all = all && rep.consistent();
  }
  if (reports.empty()) throw UsageError("check-symmetry needs an m = 0 identity or --matrix");
  ojson r{{"command", "check-symmetry"}, {"inputs", {{"spec", o.spec}}},
          {"outcome", all ? "verified" : "refuted"}, {"artifacts", {{"reports", reports}}}};
  emit(o, r, text, t0);
  return all ? 0 : kRefuted;
}

int cmd_fit(const Options& o) {
  IdentityFile f = load_spec(o);
  if (f.identities.size() != 1) throw UsageError("fit expects a file with exactly one identity");
  IdentitySpec s = f.identities.front();
  long n = order_or(o, 60);
  FitResult res = fit_spec(s, Rat(n));
  if (!res.consistent) {
    std::cerr << "inconsistent system: first failure at q^" << rat_str(*res.first_failure) << "\n";
    return kRefuted;
  }
  const size_t fitted = s.terms.size();
  if (o.prune)
    std::erase_if(s.terms, [](const IdentityTerm& t) { return !t.coeff || t.coeff->is_zero(); });
  std::cerr << "fitted " << fitted << " coefficients from " << res.equations << " equations, nullity "
            << res.nullity << (res.rational_path ? " (rational elimination)" : "") << ", " << s.terms.size()
            << " nonzero\n";
  if (o.json) {
    ojson r{{"command", "fit"}, {"inputs", {{"spec", o.spec}, {"order", n}}}, {"outcome", "fitted"}};
    r["artifacts"] = {{"equations", res.equations}, {"nullity", res.nullity}, {"spec", ojson::parse(spec_json(s))}};
    std::cout << r.dump(2) << "\n";
  } else {
    std::cout << spec_json(s) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crank dissection elements, generalized eta products and valence certificates"};
  app.require_subcommand(1);
  Options o;

  auto* series = app.add_subcommand("series", "expand C(zeta_p^ell, q)");
  series->add_option("--p", o.p, "prime")->required();
  series->add_option("--ell", o.ell, "power of zeta");
  series->add_option("--order", o.order, "expand below q^order");
  series->add_flag("--json", o.json);

  auto* table = app.add_subcommand("crank-table", "CSV of M(k, p, n)");
  table->add_option("--p", o.p)->required();
  table->add_option("--max-n", o.max_n);
  table->add_option("--convention", o.convention, "series or comb");

  auto* dissect = app.add_subcommand("dissect", "dissection element K_{p,m}(zeta^ell, z)");
  dissect->add_option("--p", o.p)->required();
  dissect->add_option("--m", o.m)->required();
  dissect->add_option("--ell", o.ell);
  dissect->add_option("--order", o.order);
  dissect->add_option("--method", o.method, "comb, modular or both");
  dissect->add_flag("--json", o.json);

  auto* cusp = app.add_subcommand("cusp-orders", "ORD table of each term at the cusps of Gamma_1(p)");
  cusp->add_option("spec,--spec", o.spec)->required();
  cusp->add_option("--p", o.p, "only identities for this prime");
  cusp->add_flag("--json", o.json);

  auto* verify = app.add_subcommand("verify", "valence certificates for identity files");
  verify->add_option("spec,--spec", o.spec)->required();
  verify->add_option("--order", o.order, "extra q-powers beyond the required order (series files: order)");
  verify->add_flag("--json", o.json);

  auto* crank = app.add_subcommand("prove-crank-theorem", "prove K_{p,0} = 0 for p = 5, 7, 11");
  crank->add_option("--p", o.p)->required();
  crank->add_option("--order", o.order);
  crank->add_flag("--json", o.json);

  auto* sym = app.add_subcommand("check-symmetry", "coefficient symmetry of K_{p,0} or a Gamma_0(p) transformation");
  sym->add_option("--spec", o.spec)->required();
  sym->add_option("--p", o.p);
  sym->add_option("--m", o.m);
  sym->add_option("--matrix", o.matrix, "a,b,c,d with c = p");
  sym->add_option("--order", o.order, "order for the independence test");
  sym->add_flag("--json", o.json);

  auto* fit = app.add_subcommand("fit", "solve for the coefficients of an identity shape");
  fit->add_option("--spec", o.spec)->required();
  fit->add_option("--order", o.order);
  fit->add_flag("--prune", o.prune, "drop terms whose fitted coefficient is zero");
  fit->add_flag("--json", o.json);

  for (auto* sc : app.get_subcommands({})) sc->add_flag("--timing", o.timing, "add timing_ms to JSON reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*series) return cmd_series(o);
    if (*table) return cmd_crank_table(o);
    if (*dissect) return cmd_dissect(o);
    if (*cusp) return cmd_cusp_orders(o);
    if (*verify) return cmd_verify(o);
    if (*crank) return cmd_prove_crank_theorem(o);
    if (*sym) return cmd_check_symmetry(o);
    if (*fit) return cmd_fit(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
