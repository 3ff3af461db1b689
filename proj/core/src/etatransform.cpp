#include "cranklab/etatransform.hpp"

#include "cranklab/dense.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cranklab {

namespace {

using cd = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

long to_long(const Int& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("matrix entry too large");
  return v.get_si();
}

// g = gcd(a, b) >= 0 with u a + v b = g
Int ext_gcd(const Int& a, const Int& b, Int& u, Int& v) {
  Int g;
  mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Int gcd_i(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// q^r at tau
cd qpow(const Rat& r, cd tau) { return std::exp(cd(0, 2 * kPi) * r.get_d() * tau); }

// enough factors for |q|^n to drop below double precision
long factor_count(cd tau, double step) {
  double im = tau.imag() * step;
  if (im <= 0) throw std::domain_error("numeric evaluation needs Im(tau) > 0");
  double n = 40.0 / (2 * kPi * im) + 10;
  return static_cast<long>(std::min(n, 2.0e6));
}

}  // namespace

// ---------------------------------------------------------------- Matrix2

Matrix2::Matrix2(Int a_, Int b_, Int c_, Int d_) : a(a_), b(b_), c(c_), d(d_) {
  if (a * d - b * c != 1) throw std::invalid_argument("matrix does not have determinant 1: " + str());
}

Matrix2 Matrix2::operator*(const Matrix2& o) const {
  return Matrix2(a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d);
}

Matrix2 Matrix2::operator-() const { return Matrix2(-a, -b, -c, -d); }

Matrix2 Matrix2::inverse() const { return Matrix2(d, -b, -c, a); }

bool Matrix2::in_gamma0(long N) const { return mod_floor(c, Int(N)) == 0; }

std::complex<double> Matrix2::act(std::complex<double> z) const {
  return (a.get_d() * z + b.get_d()) / (c.get_d() * z + d.get_d());
}

std::complex<double> Matrix2::j(std::complex<double> z) const { return c.get_d() * z + d.get_d(); }

std::string Matrix2::str() const {
  std::ostringstream os;
  os << "(" << a << " " << b << "; " << c << " " << d << ")";
  return os.str();
}

// ---------------------------------------------------------------- Cusp

Cusp::Cusp(Int a_, Int c_) {
  Int g = gcd_i(a_, c_);
  if (g == 0) throw std::invalid_argument("cusp 0/0");
  a_ /= g;
  c_ /= g;
  if (c_ < 0 || (c_ == 0 && a_ < 0)) {
    a_ = -a_;
    c_ = -c_;
  }
  a = a_;
  c = c_;
}

std::string Cusp::str() const {
  if (c == 0) return "i*inf";
  if (c == 1) return a.get_str();
  return a.get_str() + "/" + c.get_str();
}

Matrix2 Cusp::matrix() const {
  if (c == 0) return Matrix2::identity();
  // a d - b c = 1
  Int u, v;
  ext_gcd(a, c, u, v);
  return Matrix2(a, -v, c, u);
}

// ---------------------------------------------------------------- multipliers

int jacobi(const Int& a, const Int& n) {
  Int m = abs(n);
  if (mpz_even_p(m.get_mpz_t())) throw std::invalid_argument("jacobi symbol needs an odd modulus");
  return mpz_jacobi(a.get_mpz_t(), m.get_mpz_t());
}

Phase nu_eta(const Matrix2& A) {
  // (-(cz+d))^{1/2} = -i (cz+d)^{1/2} for c > 0, while (-1)^{1/2} = i
  if (A.c < 0) return nu_eta(-A) * Phase(Rat(1, 4));
  if (A.c == 0 && A.d < 0) return nu_eta(-A) * Phase(Rat(3, 4));
  const Int &a = A.a, &b = A.b, &c = A.c, &d = A.d;
  if (c == 0) return Phase(Rat(b, 24));
  Int x;
  int sym;
  if (mpz_odd_p(c.get_mpz_t())) {
    sym = jacobi(d, c);
    x = (a + d) * c - b * d * (c * c - 1) - 3 * c;
  } else {
    sym = jacobi(c, d);
    x = (a + d) * c - b * d * (c * c - 1) + 3 * d - 3 - 3 * c * d;
  }
  Rat t(x, 24);
  t.canonicalize();
  if (sym < 0) t += Rat(1, 2);
  return Phase(t);
}

SlashResult slash_eta(const Matrix2& A) { return {nu_eta(A), EtaProduct{{EtaAtom::eta(), 1}}, Rat(1, 2)}; }

SlashResult slash_f(long N, long rho, const Matrix2& A) {
  if (!A.in_gamma0(N)) throw std::invalid_argument("slash_f needs A in Gamma_0(N)");
  if (mod_floor(rho, N) == 0) throw std::invalid_argument("f_{N,rho} needs rho != 0 mod N");
  const Int &a = A.a, &b = A.b;
  Int sgn = Int(rho) * b + floor_div(Int(rho) * a, Int(N)) + floor_div(Int(rho), Int(N));
  Rat t(mod_floor(sgn, Int(2)), 2);
  Rat q(a * b * rho * rho, 2 * N);
  q.canonicalize();
  t += q;
  Matrix2 NA(a, b * N, A.c / N, A.d);
  Phase ph = Phase(t) * nu_eta(NA).pow(3);
  long target = to_long(mod_floor(Int(rho) * a, Int(N)));
  return {ph, EtaProduct{{EtaAtom::f(N, target), 1}}, Rat(1, 2)};
}

SlashResult slash_E(long N, long g, long h, const Matrix2& A0) {
  if (mod_floor(g, N) == 0 && mod_floor(h, N) == 0) throw std::invalid_argument("E_{g,h} needs (g,h) != (0,0)");
  // weight 0: A and -A act identically
  Matrix2 A = (A0.c < 0 || (A0.c == 0 && A0.d < 0)) ? -A0 : A0;
  auto [r, u] = reduce_E(N, g, h);
  Phase ph = u;
  Int G(r.a), H(r.b);
  const Int &a = A.a, &b = A.b, &c = A.c, &d = A.d;
  Int g2, h2;
  if (c == 0) {
    Rat x(G, N);
    x.canonicalize();
    ph *= Phase(Rat(b) * bernoulli_p2(x) / 2);
    g2 = G;
    h2 = b * G + H;
  } else {
    Rat eps;
    if (mpz_odd_p(c.get_mpz_t())) {
      eps = Rat(b * d * (1 - c * c) + c * (a + d - 3), 12);
    } else {
      eps = Rat(3, 4) + Rat(a * c * (1 - d * d) + d * (b - c + 3), 12);
    }
    eps.canonicalize();
    Rat del = Rat(G * G * a * b + 2 * G * H * b * c + H * H * c * d, Int(N) * N) - Rat(G * b + H * (d - 1), N);
    del.canonicalize();
    ph *= Phase(eps + del / 2);
    g2 = G * a + H * c;
    h2 = G * b + H * d;
  }
  auto [r3, u3] = reduce_E(N, to_long(g2), to_long(mod_floor(h2, Int(N))));
  ph *= u3;
  return {ph, EtaProduct{{r3, 1}}, Rat(0)};
}

Phase mu_multiplier(long p, const Matrix2& A, long ell) {
  if (!A.in_gamma0(p)) throw std::invalid_argument("mu_multiplier needs A in Gamma_0(p)");
  Rat t = Rat(Int(ell) * (A.d - 1), p) + Rat(A.c * A.d * ell * ell, Int(p) * p) - Rat(A.c * ell, p);
  t.canonicalize();
  return Phase(t / 2);
}

SlashResult slash_product(const EtaProduct& F, const Matrix2& A) {
  SlashResult out{Phase(), EtaProduct(), F.weight()};
  out.target.scalar = F.scalar;
  for (const auto& [atom, n] : F.factors) {
    switch (atom.kind) {
      case AtomKind::Eta: {
        auto dec = decompose_scaled(atom.delta, A);
        if (dec.w != 1) throw std::invalid_argument("eta(" + std::to_string(atom.delta) + "z) is not mapped to an eta atom by " + A.str());
        out.phase *= nu_eta(dec.B).pow(n);
        out.target.mul(EtaAtom::eta(to_long(dec.x)), n);
        break;
      }
      case AtomKind::F: {
        if (atom.delta != 1) throw std::invalid_argument("slash_product: scaled f atoms are unsupported");
        auto r = slash_f(atom.N, atom.a, A);
        out.phase *= r.phase.pow(n);
        out.target *= r.target.pow(n);
        break;
      }
      case AtomKind::Geta: {
        // eta_{N,k} = f_{N,k} / eta(N z)
        if (atom.delta != 1) throw std::invalid_argument("slash_product: scaled eta_{N,k} atoms are unsupported");
        auto r = slash_f(atom.N, atom.a, A);
        auto dec = decompose_scaled(atom.N, A);
        Phase ph = r.phase * nu_eta(dec.B).inv();
        out.phase *= ph.pow(n);
        long k = r.target.factors.front().first.a;
        out.target.mul(EtaAtom::geta(atom.N, k), n);
        break;
      }
      case AtomKind::E: {
        if (atom.delta != 1) throw std::invalid_argument("slash_product: scaled E atoms are unsupported");
        auto r = slash_E(atom.N, atom.a, atom.b, A);
        out.phase *= r.phase.pow(n);
        out.target *= r.target.pow(n);
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- decomposition

ScaledDecomposition decompose_scaled(long delta, const Matrix2& A) {
  if (delta < 1) throw std::invalid_argument("decompose_scaled needs delta >= 1");
  Int m11 = A.a * delta, m12 = A.b * delta;
  const Int &m21 = A.c, &m22 = A.d;
  Int u, v;
  Int x = ext_gcd(m11, m21, u, v);
  Int al = m11 / x, ga = m21 / x;
  // al * u + ga * v = 1, so B = (al, -v; ga, u) has determinant 1
  Int be0 = -v, ep0 = u;
  Int w = Int(delta) / x;
  Int y0 = ep0 * m12 - be0 * m22;
  Int t = floor_div(y0, w);
  Int be = be0 + t * al, ep = ep0 + t * ga;
  Int y = y0 - t * w;
  return {Matrix2(al, be, ga, ep), x, y, w};
}

std::vector<AtomImage> transform_atom(const EtaAtom& atom, const Matrix2& A) {
  std::vector<AtomImage> out;
  auto eta_part = [&](long scale) {
    auto dec = decompose_scaled(scale, A);
    Rat ord(dec.x, 24 * dec.w);
    ord.canonicalize();
    out.push_back({nu_eta(dec.B), EtaAtom::eta(), dec.x, dec.y, dec.w, Rat(1, 2), ord});
  };
  auto e_part = [&](long N, long g, long h, long scale) {
    auto dec = decompose_scaled(scale, A);
    auto r = slash_E(N, g, h, dec.B);
    const EtaAtom& e = r.target.factors.front().first;
    Rat ord = e.lead_exponent() * dec.x / dec.w;
    out.push_back({r.phase, e, dec.x, dec.y, dec.w, Rat(0), ord});
  };
  switch (atom.kind) {
    case AtomKind::Eta:
      eta_part(atom.delta);
      break;
    case AtomKind::F:
      eta_part(atom.N * atom.delta);
      e_part(atom.N, atom.a, 0, atom.N * atom.delta);
      break;
    case AtomKind::Geta:
      e_part(atom.N, atom.a, 0, atom.N * atom.delta);
      break;
    case AtomKind::E:
      e_part(atom.N, atom.a, atom.b, atom.delta);
      break;
  }
  return out;
}

Rat ord_at_matrix(const EtaProduct& F, const Matrix2& A) {
  Rat total = 0;
  for (const auto& [atom, n] : F.factors)
    for (const auto& im : transform_atom(atom, A)) total += im.order * n;
  return total;
}

Rat ord_at_cusp(const EtaProduct& F, const Cusp& cusp) { return ord_at_matrix(F, cusp.matrix()); }

namespace {

// k with e(t) = zeta_p^k, or throws
long zeta_exponent(const Rat& t0, int p) {
  Rat t = t0 * p;
  t.canonicalize();
  if (t.get_den() != 1) throw std::domain_error("cusp expansion needs a root of unity outside Q(zeta_p)");
  return to_long(mod_floor(t.get_num(), Int(p)));
}

// j with w = p^j
long p_valuation_exact(const Int& w0, int p) {
  Int w = w0;
  long j = 0;
  while (w % p == 0) {
    w /= p;
    ++j;
  }
  if (w != 1) throw std::domain_error("cusp expansion needs widths that are powers of p");
  return j;
}

}  // namespace

MatrixExpansion expand_at_matrix(const EtaProduct& F, const Matrix2& A, int p, const Rat& trunc) {
  MatrixExpansion out{Phase(), Rat(0), QSeries()};
  struct Piece {
    AtomImage im;
    long n;
  };
  std::vector<Piece> pieces;
  Rat lead = 0;
  for (const auto& [atom, n] : F.factors) {
    for (auto& im : transform_atom(atom, A)) {
      if (im.atom.kind == AtomKind::E && im.atom.N != p)
        throw std::domain_error("cusp expansion of a level " + std::to_string(im.atom.N) + " E atom over Q(zeta_" +
                                std::to_string(p) + ")");
      lead += im.order * n;
      out.phase *= im.phase.pow(n);
      out.p_power -= im.weight * p_valuation_exact(im.w, p) * n;
      // the leading monomial of atom((x z + y)/w) carries e(y * lead / w)
      Rat lead_atom = im.atom.kind == AtomKind::Eta ? Rat(1, 24) : im.atom.lead_exponent();
      out.phase *= Phase(lead_atom * im.y / im.w * n);
      pieces.push_back({im, n});
    }
  }
  std::vector<BinomialFactor> fs;
  Rat bound = trunc - lead;
  for (const auto& [im, n] : pieces) {
    Rat step(im.x, im.w);
    step.canonicalize();
    Rat rot(im.y, im.w);
    rot.canonicalize();
    if (im.atom.kind == AtomKind::Eta) {
      for (long m = 1; step * m < bound; ++m) fs.push_back({step * m, zeta_exponent(rot * m, p), 1, n});
    } else {
      Rat g(im.atom.a, p);
      long h = im.atom.b;
      for (long m = 1;; ++m) {
        Rat r1 = Rat(m - 1) + g, r2 = Rat(m) - g;
        bool any = false;
        if (step * r1 < bound) {
          fs.push_back({step * r1, h + zeta_exponent(rot * r1, p), 1, n});
          any = true;
        }
        if (step * r2 < bound) {
          fs.push_back({step * r2, -h + zeta_exponent(rot * r2, p), 1, n});
          any = true;
        }
        if (!any) break;
      }
    }
  }
  out.series = expand_product(p, lead, fs, trunc, F.scalar);
  return out;
}

Rat etaquot_ord_closed(const EtaProduct& F, const Cusp& cusp) {
  Rat total = 0;
  for (const auto& [atom, n] : F.factors) {
    if (atom.kind != AtomKind::Eta) throw std::invalid_argument("etaquot_ord_closed: only eta(m z) atoms");
    Int g = gcd_i(Int(atom.delta), cusp.c);
    Rat r(g * g * n, 24 * atom.delta);
    r.canonicalize();
    total += r;
  }
  return total;
}

Rat f_ord_closed(long N, long rho, const Cusp& cusp) {
  Int g = gcd_i(cusp.c, Int(N));
  Rat s(cusp.a * rho, g);
  s.canonicalize();
  Rat r = Rat(g * g, 24 * N) + Rat(g * g, 2 * N) * bernoulli_p2(s);
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------- numerics

cd eval_eta(cd tau) {
  long n = factor_count(tau, 1.0);
  cd q = qpow(Rat(1), tau);
  cd prod = 1, qn = 1;
  for (long k = 1; k <= n; ++k) {
    qn *= q;
    prod *= 1.0 - qn;
  }
  return qpow(Rat(1, 24), tau) * prod;
}

cd eval_f(long N, long rho, cd tau) {
  if (mod_floor(rho, N) == 0) throw std::invalid_argument("eval_f needs rho != 0 mod N");
  long n = factor_count(tau, static_cast<double>(N));
  cd prod = 1;
  for (long k = 0; k <= n; ++k) {
    prod *= 1.0 - qpow(Rat(rho + N * k), tau);
    prod *= 1.0 - qpow(Rat(N - rho + N * k), tau);
    prod *= 1.0 - qpow(Rat(N + N * k), tau);
  }
  Rat e((N - 2 * rho) * (N - 2 * rho), 8 * N);
  e.canonicalize();
  double sign = mod_floor(floor_div(Int(rho), Int(N)), Int(2)) == 0 ? 1.0 : -1.0;
  return sign * qpow(e, tau) * prod;
}

cd eval_geta(long N, long k, cd tau) { return eval_E(N, k, 0, static_cast<double>(N) * tau); }

cd eval_E(long N, long g, long h, cd tau) {
  long n = factor_count(tau, 1.0);
  cd zh = std::exp(cd(0, 2 * kPi * static_cast<double>(h) / N));
  cd prod = 1;
  for (long m = 1; m <= n; ++m) {
    prod *= 1.0 - zh * qpow(Rat(m - 1) + Rat(g, N), tau);
    prod *= 1.0 - qpow(Rat(m) - Rat(g, N), tau) / zh;
  }
  Rat x(g, N);
  x.canonicalize();
  Rat B = x * x - x + Rat(1, 6);
  return qpow(B / 2, tau) * prod;
}

cd eval_atom(const EtaAtom& a, cd tau) {
  cd t = static_cast<double>(a.delta) * tau;
  switch (a.kind) {
    case AtomKind::Eta:
      return eval_eta(t);
    case AtomKind::F:
      return eval_f(a.N, a.a, t);
    case AtomKind::Geta:
      return eval_geta(a.N, a.a, t);
    case AtomKind::E:
      return eval_E(a.N, a.a, a.b, t);
  }
  return 0;
}

cd eval_product(const EtaProduct& F, cd tau) {
  cd v = F.scalar ? F.scalar->embed() : cd(1);
  for (const auto& [atom, n] : F.factors) v *= std::pow(eval_atom(atom, tau), static_cast<double>(n));
  return v;
}

cd eval_image(const AtomImage& im, cd z) {
  cd tau = (im.x.get_d() * z + im.y.get_d()) / im.w.get_d();
  double scale = std::pow(im.w.get_d(), -im.weight.get_d());
  return phase_to_float(im.phase) * scale * eval_atom(im.atom, tau);
}

}  // namespace cranklab
