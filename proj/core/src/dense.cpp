#include "cranklab/dense.hpp"

#include <numeric>
#include <stdexcept>

namespace cranklab {

GroupRingSeries::GroupRingSeries(int lanes, long D, long lead, long step, long len)
    : lanes_(lanes), D_(D), lead_(lead), step_(step), len_(len < 0 ? 0 : len),
      a_(static_cast<size_t>(len_) * lanes) {
  if (lanes < 1 || step < 1) throw std::invalid_argument("bad group ring series shape");
}

void GroupRingSeries::mul_binomial(long k, long h, int sign) {
  if (k <= 0) throw std::invalid_argument("binomial exponent must be positive");
  if (lanes_ == 1) {
    for (long i = len_ - 1; i >= k; --i) {
      if (sign > 0) at(i, 0) -= at(i - k, 0);
      else at(i, 0) += at(i - k, 0);
    }
    return;
  }
  long s = mod_floor(h, lanes_);
  for (long i = len_ - 1; i >= k; --i) {
    for (int j = 0; j < lanes_; ++j) {
      const Int& src = at(i - k, j);
      if (src == 0) continue;
      Int& dst = at(i, (j + s) % lanes_);
      if (sign > 0) dst -= src;
      else dst += src;
    }
  }
}

void GroupRingSeries::div_binomial(long k, long h, int sign) {
  if (k <= 0) throw std::invalid_argument("binomial exponent must be positive");
  if (lanes_ == 1) {
    for (long i = k; i < len_; ++i) {
      if (sign > 0) at(i, 0) += at(i - k, 0);
      else at(i, 0) -= at(i - k, 0);
    }
    return;
  }
  long s = mod_floor(h, lanes_);
  for (long i = k; i < len_; ++i) {
    for (int j = 0; j < lanes_; ++j) {
      const Int& src = at(i - k, j);
      if (src == 0) continue;
      Int& dst = at(i, (j + s) % lanes_);
      if (sign > 0) dst += src;
      else dst -= src;
    }
  }
}

QSeries GroupRingSeries::to_qseries(int p, const std::optional<CycNum>& scalar) const {
  if (lanes_ != 1 && lanes_ != p) throw std::invalid_argument("lane count does not match the field");
  QSeries out(p, D_, lead_ + len_ * step_);
  std::vector<Int> g(p);
  for (long i = 0; i < len_; ++i) {
    CycNum c;
    if (lanes_ == 1) {
      if (at(i, 0) == 0) continue;
      c = CycNum(p, Rat(at(i, 0)));
    } else {
      bool nz = false;
      for (int j = 0; j < p; ++j) {
        g[j] = at(i, j);
        if (g[j] != 0) nz = true;
      }
      if (!nz) continue;
      c = CycNum::from_group_ring(p, g);
      if (c.is_zero()) continue;
    }
    if (scalar) c *= *scalar;
    out.add_scaled(lead_ + i * step_, c);
  }
  return out;
}

namespace {

long lcm_l(long a, long b) { return a / std::gcd(a, b) * b; }

long to_long(const Int& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("exponent lattice overflow");
  return v.get_si();
}

void push_family(std::vector<BinomialFactor>& out, const Rat& first, const Rat& stride, const Rat& bound,
                 long h, int sign, long power) {
  for (Rat e = first; e < bound; e += stride) out.push_back({e, h, sign, power});
}

}  // namespace

void atom_factors(const EtaAtom& atom, long power, const Rat& bound, std::vector<BinomialFactor>& out) {
  const Rat dl(atom.delta);
  switch (atom.kind) {
    case AtomKind::Eta:
      push_family(out, dl, dl, bound, 0, 1, power);
      break;
    case AtomKind::F: {
      long N = atom.N, r = atom.a;
      Rat step = dl * N;
      push_family(out, dl * r, step, bound, 0, 1, power);
      push_family(out, dl * (N - r), step, bound, 0, 1, power);
      push_family(out, step, step, bound, 0, 1, power);
      break;
    }
    case AtomKind::Geta: {
      long N = atom.N, k = mod_floor(atom.a, N);
      Rat step = dl * N;
      push_family(out, dl * k, step, bound, 0, 1, power);
      if (2 * k != N) push_family(out, dl * (N - k), step, bound, 0, 1, power);
      break;
    }
    case AtomKind::E: {
      long N = atom.N, g = atom.a, h = atom.b;
      Rat gN(g, N);
      gN.canonicalize();
      // (1 - zeta^h q^{m-1+g/N}) (1 - zeta^{-h} q^{m-g/N}), m >= 1
      push_family(out, dl * gN, dl, bound, h, 1, power);
      push_family(out, dl * (1 - gN), dl, bound, -h, 1, power);
      break;
    }
  }
}

QSeries expand_product(int p, const Rat& lead, const std::vector<BinomialFactor>& factors, const Rat& trunc,
                       std::optional<CycNum> scalar) {
  long D = 1;
  auto absorb = [&](const Rat& r) { D = lcm_l(D, to_long(r.get_den())); };
  absorb(lead);
  absorb(trunc);
  bool lanes_needed = false;
  std::vector<const BinomialFactor*> live;
  for (const auto& f : factors) {
    if (f.power == 0) continue;
    if (f.e < 0) throw std::invalid_argument("negative binomial exponent");
    if (f.e == 0) {
      CycNum one(p, Rat(1));
      CycNum c = one - CycNum::zeta_pow(p, f.h).scaled(Rat(f.sign));
      if (c.is_zero()) throw std::domain_error("vanishing constant factor in product");
      CycNum cp = one;
      for (long i = 0; i < std::labs(f.power); ++i) cp *= c;
      if (f.power < 0) cp = cp.inv();
      scalar = scalar ? *scalar * cp : cp;
      continue;
    }
    if (f.e + lead >= trunc) continue;
    absorb(f.e);
    if (mod_floor(f.h, p) != 0) lanes_needed = true;
    live.push_back(&f);
  }
  long step = 0;
  for (const auto* f : live) step = std::gcd(step, to_long(f->e.get_num() * (D / f->e.get_den())));
  if (step == 0) step = D;
  long lead_s = to_long(lead.get_num() * (D / lead.get_den()));
  long trunc_s = to_long(trunc.get_num() * (D / trunc.get_den()));
  long len = trunc_s > lead_s ? (trunc_s - lead_s + step - 1) / step : 0;
  GroupRingSeries s(lanes_needed ? p : 1, D, lead_s, step, len);
  if (len > 0) s.at(0, 0) = 1;
  for (const auto* f : live) {
    long k = to_long(f->e.get_num() * (D / f->e.get_den())) / step;
    if (k >= len) continue;
    for (long i = 0; i < std::labs(f->power); ++i) {
      if (f->power > 0) s.mul_binomial(k, f->h, f->sign);
      else s.div_binomial(k, f->h, f->sign);
    }
  }
  QSeries out = s.to_qseries(p, scalar);
  // the dense grid may overshoot the requested bound by less than one step
  return out.truncated(trunc);
}

}  // namespace cranklab
