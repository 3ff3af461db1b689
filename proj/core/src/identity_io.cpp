#include "cranklab/identity_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cranklab {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

SpecError::SpecError(const std::string& msg, std::string path, long line, long column)
    : std::runtime_error(msg), path_(std::move(path)), line_(line), column_(column) {}

// ---------------------------------------------------------------- locating

namespace {

struct Scanner {
  const std::string& s;
  size_t i = 0;

  void ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
  }
  bool string(std::string* out) {
    if (i >= s.size() || s[i] != '"') return false;
    ++i;
    while (i < s.size() && s[i] != '"') {
      if (s[i] == '\\') ++i;
      if (out && i < s.size()) out->push_back(s[i]);
      ++i;
    }
    ++i;
    return i <= s.size();
  }
  bool value() {
    ws();
    if (i >= s.size()) return false;
    char c = s[i];
    if (c == '"') return string(nullptr);
    if (c == '{' || c == '[') {
      char close = c == '{' ? '}' : ']';
      ++i;
      ws();
      if (i < s.size() && s[i] == close) {
        ++i;
        return true;
      }
      while (true) {
        if (c == '{') {
          ws();
          if (!string(nullptr)) return false;
          ws();
          if (i >= s.size() || s[i] != ':') return false;
          ++i;
        }
        if (!value()) return false;
        ws();
        if (i < s.size() && s[i] == ',') {
          ++i;
          continue;
        }
        if (i < s.size() && s[i] == close) {
          ++i;
          return true;
        }
        return false;
      }
    }
    while (i < s.size() && std::string(",}] \t\r\n").find(s[i]) == std::string::npos) ++i;
    return true;
  }
  // positions at the start of the member or element named by tok
  bool child(const std::string& tok) {
    ws();
    if (i >= s.size()) return false;
    if (s[i] == '{') {
      ++i;
      while (true) {
        ws();
        std::string key;
        if (!string(&key)) return false;
        ws();
        if (i >= s.size() || s[i] != ':') return false;
        ++i;
        ws();
        if (key == tok) return true;
        if (!value()) return false;
        ws();
        if (i >= s.size() || s[i] != ',') return false;
        ++i;
      }
    }
    if (s[i] == '[') {
      long idx;
      try {
        idx = std::stol(tok);
      } catch (...) {
        return false;
      }
      ++i;
      for (long k = 0; k < idx; ++k) {
        if (!value()) return false;
        ws();
        if (i >= s.size() || s[i] != ',') return false;
        ++i;
      }
      ws();
      return true;
    }
    return false;
  }
};

}  // namespace

std::pair<long, long> locate_json_pointer(const std::string& text, const std::string& pointer) {
  Scanner sc{text};
  std::vector<std::string> toks;
  for (size_t a = 1; a <= pointer.size() && !pointer.empty();) {
    size_t b = pointer.find('/', a);
    if (b == std::string::npos) b = pointer.size();
    toks.push_back(pointer.substr(a, b - a));
    a = b + 1;
  }
  for (const auto& t : toks)
    if (!sc.child(t)) return {0, 0};
  sc.ws();
  long line = 1, col = 1;
  for (size_t k = 0; k < sc.i && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// ---------------------------------------------------------------- parsing

namespace {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

struct Reader {
  const std::string& text;
  const std::string& source;

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    auto [line, col] = locate_json_pointer(text, path);
    std::string where = source;
    if (line > 0) where += ":" + std::to_string(line) + ":" + std::to_string(col);
    throw SpecError(where + ": " + msg + " (at " + (path.empty() ? "/" : path) + ")", path, line, col);
  }

  const json& member(const json& j, const std::string& path, const char* key) const {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path, std::string("missing field \"") + key + "\"");
    return *it;
  }

  long integer(const json& j, const std::string& path) const {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long>();
  }

  long integer_or(const json& j, const std::string& path, const char* key, long dflt) const {
    auto it = j.find(key);
    return it == j.end() ? dflt : integer(*it, path + "/" + key);
  }

  Rat rational(const json& j, const std::string& path) const {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (!j.is_string()) fail(path, "expected a rational as a string such as \"-1/24\"");
    try {
      return parse_rat(j.get<std::string>());
    } catch (const std::exception&) {
      fail(path, "malformed rational \"" + j.get<std::string>() + "\"");
    }
  }

  int prime(const json& j, const std::string& path) const {
    long p = integer(j, path);
    if (p < 5 || !is_prime(p)) fail(path, "p must be a prime >= 5");
    return static_cast<int>(p);
  }

  CycNum cyc(const json& j, const std::string& path, int expect_p) const {
    int p = prime(member(j, path, "p"), path + "/p");
    if (expect_p && p != expect_p)
      fail(path + "/p", "coefficient field p=" + std::to_string(p) + " differs from p=" + std::to_string(expect_p));
    const json& c = member(j, path, "coords");
    if (!c.is_array() || c.size() != static_cast<size_t>(p - 1))
      fail(path + "/coords", "expected " + std::to_string(p - 1) + " coordinates");
    std::vector<Rat> v;
    for (size_t i = 0; i < c.size(); ++i) v.push_back(rational(c[i], path + "/coords/" + std::to_string(i)));
    return CycNum::from_coords(p, v);
  }

  std::pair<EtaAtom, long> atom(const json& j, const std::string& path) const {
    if (!j.is_array() || j.empty() || !j[0].is_string()) fail(path, "expected an atom such as [\"f\", 13, 1, 1]");
    const std::string kind = j[0].get<std::string>();
    auto arg = [&](size_t i) { return integer(j[i], path + "/" + std::to_string(i)); };
    auto need = [&](size_t lo, size_t hi) {
      if (j.size() < lo || j.size() > hi) fail(path, "wrong number of entries for atom \"" + kind + "\"");
    };
    try {
      if (kind == "eta") {
        need(3, 3);
        if (arg(1) < 1) fail(path + "/1", "delta must be positive");
        return {EtaAtom::eta(arg(1)), arg(2)};
      }
      if (kind == "f") {
        need(4, 5);
        return {EtaAtom::f(arg(1), arg(2), j.size() == 5 ? arg(4) : 1), arg(3)};
      }
      if (kind == "geta") {
        need(4, 5);
        return {EtaAtom::geta(arg(1), arg(2), j.size() == 5 ? arg(4) : 1), arg(3)};
      }
      if (kind == "E") {
        need(5, 6);
        return {EtaAtom::E(arg(1), arg(2), arg(3), j.size() == 6 ? arg(5) : 1), arg(4)};
      }
    } catch (const SpecError&) {
      throw;
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
    fail(path + "/0", "unknown atom kind \"" + kind + "\"");
  }

  EtaProduct product(const json& j, const std::string& path) const {
    if (!j.is_array()) fail(path, "expected a list of atoms");
    EtaProduct F;
    for (size_t i = 0; i < j.size(); ++i) {
      auto [a, n] = atom(j[i], path + "/" + std::to_string(i));
      F.mul(a, n);
    }
    return F;
  }

  IdentitySpec spec(const json& j, const std::string& path) const {
    IdentitySpec s;
    if (auto it = j.find("name"); it != j.end() && it->is_string()) s.name = it->get<std::string>();
    s.p = prime(member(j, path, "p"), path + "/p");
    long m = integer(member(j, path, "m"), path + "/m");
    if (m < 0 || m >= s.p) fail(path + "/m", "m must lie in 0..p-1");
    s.m = static_cast<int>(m);
    s.ell = integer_or(j, path, "ell", 1);
    if (mod_floor(s.ell, static_cast<long>(s.p)) == 0) fail(path + "/ell", "ell must be a unit mod p");
    s.weight = static_cast<int>(integer_or(j, path, "weight", 1));
    s.kpower = integer_or(j, path, "kpower", 0);
    if (auto it = j.find("prefactor"); it != j.end()) s.prefactor = product(*it, path + "/prefactor");
    const json& terms = member(j, path, "terms");
    if (!terms.is_array()) fail(path + "/terms", "expected a list of terms");
    const size_t len = static_cast<size_t>(s.p + 1) / 2;
    for (size_t i = 0; i < terms.size(); ++i) {
      const std::string tp = path + "/terms/" + std::to_string(i);
      const json& t = terms[i];
      IdentityTerm term;
      if (auto it = t.find("coeff"); it != t.end() && !it->is_null()) term.coeff = cyc(*it, tp + "/coeff", s.p);
      const json& nv = member(t, tp, "nvec");
      if (!nv.is_array() || nv.size() != len)
        fail(tp + "/nvec", "expected an eta vector of length " + std::to_string(len));
      std::vector<long> n;
      for (size_t k = 0; k < len; ++k) n.push_back(integer(nv[k], tp + "/nvec/" + std::to_string(k)));
      term.nvec = EtaVector(s.p, n);
      term.r = integer_or(t, tp, "r", 1);
      if (term.r < 1 || term.r > (s.p - 1) / 2) fail(tp + "/r", "r must lie in 1..(p-1)/2");
      term.k = integer_or(t, tp, "k", 0);
      s.terms.push_back(std::move(term));
    }
    return s;
  }

  SeriesIdentity series(const json& j, const std::string& path) const {
    SeriesIdentity s;
    if (auto it = j.find("name"); it != j.end() && it->is_string()) s.name = it->get<std::string>();
    s.p = prime(member(j, path, "p"), path + "/p");
    s.ell = integer_or(j, path, "ell", 1);
    if (auto it = j.find("shift"); it != j.end()) s.shift = rational(*it, path + "/shift");
    const json& terms = member(j, path, "terms");
    if (!terms.is_array()) fail(path + "/terms", "expected a list of terms");
    for (size_t i = 0; i < terms.size(); ++i) {
      const std::string tp = path + "/terms/" + std::to_string(i);
      CycNum c = cyc(member(terms[i], tp, "coeff"), tp + "/coeff", s.p);
      s.terms.emplace_back(c, product(member(terms[i], tp, "product"), tp + "/product"));
    }
    return s;
  }

  void any(const json& j, const std::string& path, IdentityFile& out) const {
    if (!j.is_object()) fail(path, "expected an object");
    std::string kind = "dissection";
    if (auto it = j.find("kind"); it != j.end()) {
      if (!it->is_string()) fail(path + "/kind", "expected a string");
      kind = it->get<std::string>();
    }
    if (kind == "dissection") out.identities.push_back(spec(j, path));
    else if (kind == "crank-series") out.series.push_back(series(j, path));
    else fail(path + "/kind", "unknown identity kind \"" + kind + "\"");
  }
};

}  // namespace

IdentityFile parse_identity_file(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset to line and column
    long line = 1, col = 1;
    for (size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    auto pos = what.find(": ");
    throw SpecError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON syntax error: " +
                        (pos == std::string::npos ? what : what.substr(pos + 2)),
                    "", line, col);
  }
  Reader rd{text, source};
  IdentityFile out;
  if (j.is_object() && j.contains("identities")) {
    const json& list = j["identities"];
    if (!list.is_array()) rd.fail("/identities", "expected a list");
    for (size_t i = 0; i < list.size(); ++i) rd.any(list[i], "/identities/" + std::to_string(i), out);
  } else {
    rd.any(j, "", out);
  }
  return out;
}

IdentityFile load_identity_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(path + ": cannot open file", "", 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_identity_file(ss.str(), path);
}

CycNum parse_cycnum(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("JSON syntax error: ") + e.what(), "", 0, 0);
  }
  std::string src = "<cycnum>";
  return Reader{text, src}.cyc(j, "", 0);
}

// ---------------------------------------------------------------- writing

namespace {

ojson cyc_obj(const CycNum& c) {
  ojson coords = ojson::array();
  for (const auto& r : c.coords()) coords.push_back(rat_str(r));
  return ojson{{"p", c.p()}, {"coords", coords}};
}

ojson atom_obj(const EtaAtom& a, long n) {
  switch (a.kind) {
    case AtomKind::Eta:
      return ojson::array({"eta", a.delta, n});
    case AtomKind::F:
      return a.delta == 1 ? ojson::array({"f", a.N, a.a, n}) : ojson::array({"f", a.N, a.a, n, a.delta});
    case AtomKind::Geta:
      return a.delta == 1 ? ojson::array({"geta", a.N, a.a, n}) : ojson::array({"geta", a.N, a.a, n, a.delta});
    case AtomKind::E:
      return a.delta == 1 ? ojson::array({"E", a.N, a.a, a.b, n}) : ojson::array({"E", a.N, a.a, a.b, n, a.delta});
  }
  return {};
}

ojson rat_or_null(const std::optional<Rat>& r) { return r ? ojson(rat_str(*r)) : ojson(nullptr); }

// Indented layout that keeps short containers on one line.
void pretty(const ojson& j, int indent, int level, std::string& out) {
  const bool container = j.is_object() || j.is_array();
  std::string flat = j.dump();
  if (!container || indent < 0 || flat.size() + level * indent <= 100) {
    out += indent < 0 ? flat : j.dump(-1, ' ', false);
    return;
  }
  const std::string pad((level + 1) * indent, ' ');
  out += j.is_object() ? "{\n" : "[\n";
  size_t i = 0;
  for (auto it = j.begin(); it != j.end(); ++it, ++i) {
    out += pad;
    if (j.is_object()) out += ojson(it.key()).dump() + ": ";
    pretty(*it, indent, level + 1, out);
    out += i + 1 < j.size() ? ",\n" : "\n";
  }
  out += std::string(level * indent, ' ') + (j.is_object() ? "}" : "]");
}

std::string render(const ojson& j, int indent) {
  if (indent < 0) return j.dump();
  std::string out;
  pretty(j, indent, 0, out);
  return out;
}

}  // namespace

std::string cycnum_json(const CycNum& c) { return cyc_obj(c).dump(); }

std::string phase_json(const Phase& t) { return ojson{{"t", rat_str(t.t())}}.dump(); }

std::string spec_json(const IdentitySpec& s, int indent) {
  ojson j;
  if (!s.name.empty()) j["name"] = s.name;
  j["p"] = s.p;
  j["m"] = s.m;
  if (s.ell != 1) j["ell"] = s.ell;
  j["weight"] = s.weight;
  if (s.kpower != 0) j["kpower"] = s.kpower;
  ojson pre = ojson::array();
  for (const auto& [a, n] : s.prefactor.factors) pre.push_back(atom_obj(a, n));
  j["prefactor"] = pre;
  ojson terms = ojson::array();
  for (const auto& t : s.terms) {
    ojson o;
    o["coeff"] = t.coeff ? cyc_obj(*t.coeff) : ojson(nullptr);
    o["nvec"] = t.nvec.n;
    o["r"] = t.r;
    o["k"] = t.k;
    terms.push_back(o);
  }
  j["terms"] = terms;
  return render(j, indent);
}

std::string certificate_json(const ValenceCertificate& c, int indent) {
  ojson j;
  j["name"] = c.name;
  j["p"] = c.p;
  j["m"] = c.m;
  j["weight"] = rat_str(c.weight);
  j["index"] = c.index;
  j["target"] = rat_str(c.target);
  j["j0"] = c.j0 ? ojson(*c.j0) : ojson(nullptr);
  j["j0_order"] = rat_str(c.j0_order);
  ojson cs = ojson::array();
  for (const auto& b : c.cusps) {
    ojson o;
    o["cusp"] = b.cusp.str();
    o["width"] = b.width;
    o["lhs_bound"] = rat_str(b.lhs_exact);
    o["lhs"] = b.lhs.get_si();
    o["rhs"] = rat_or_null(b.rhs);
    o["bound"] = b.bound.get_si();
    cs.push_back(o);
  }
  j["cusps"] = cs;
  j["B"] = c.B.get_si();
  j["required"] = c.required.get_si();
  j["vanish_below"] = rat_str(c.vanish_below);
  j["checked_to"] = rat_str(c.checked_to);
  j["first_nonzero"] = rat_or_null(c.first_nonzero);
  j["verified"] = c.verified;
  return render(j, indent);
}

std::string ord_table_json(const OrdTable& t, int indent) {
  ojson j;
  ojson cs = ojson::array();
  for (const auto& c : t.cusps) cs.push_back(c.str());
  j["cusps"] = cs;
  j["widths"] = t.widths;
  ojson rows = ojson::array();
  for (size_t i = 0; i < t.rows.size(); ++i) {
    ojson vals = ojson::array();
    for (const auto& x : t.ORD[i]) vals.push_back(rat_str(x));
    rows.push_back(ojson{{"f", t.rows[i]}, {"ORD", vals}});
  }
  j["rows"] = rows;
  return render(j, indent);
}

std::string ord_table_text(const OrdTable& t) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> head{"f"};
  for (const auto& c : t.cusps) head.push_back(c.str());
  cells.push_back(head);
  std::vector<std::string> w{"width"};
  for (long x : t.widths) w.push_back(std::to_string(x));
  cells.push_back(w);
  for (size_t i = 0; i < t.rows.size(); ++i) {
    std::vector<std::string> row{t.rows[i]};
    for (const auto& x : t.ORD[i]) row.push_back(rat_str(x));
    cells.push_back(row);
  }
  std::vector<size_t> width(head.size(), 0);
  for (const auto& r : cells)
    for (size_t k = 0; k < r.size(); ++k) width[k] = std::max(width[k], r[k].size());
  std::string out;
  for (const auto& r : cells) {
    std::string line;
    for (size_t k = 0; k < r.size(); ++k) {
      std::string cell = r[k];
      if (k == 0) cell += std::string(width[k] - cell.size(), ' ');
      else cell = std::string(width[k] - cell.size(), ' ') + cell;
      line += (k ? "  " : "") + cell;
    }
    out += line + "\n";
  }
  return out;
}

}  // namespace cranklab
