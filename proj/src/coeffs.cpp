#include "taut/coeffs.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace taut {

void TautMonomial::set_psi(int pt, int exp) {
  for (auto it = psi.begin(); it != psi.end(); ++it) {
    if (it->first == pt) {
      if (exp == 0)
        psi.erase(it);
      else
        it->second = static_cast<uint8_t>(exp);
      return;
    }
  }
  if (exp != 0) {
    psi.push_back({static_cast<uint8_t>(pt), static_cast<uint8_t>(exp)});
    std::sort(psi.begin(), psi.end());
  }
}

void TautMonomial::normalize() {
  std::sort(psi.begin(), psi.end());
  std::sort(min_pts.begin(), min_pts.end());
  std::sort(kappa.begin(), kappa.end());
  std::sort(lam.begin(), lam.end());
  std::sort(ch.begin(), ch.end());
}

std::string TautMonomial::encode() const {
  std::string s;
  s += static_cast<char>('A' + min_class);
  s += static_cast<char>(min_pts.size());
  for (auto p : min_pts) s += static_cast<char>(p);
  s += static_cast<char>(psi.size());
  for (auto &[p, e] : psi) {
    s += static_cast<char>(p);
    s += static_cast<char>(e);
  }
  s += static_cast<char>(kappa.size());
  for (auto k : kappa) {
    s += static_cast<char>(k & 0xff);
    s += static_cast<char>(k >> 8);
  }
  s += static_cast<char>(lam.size());
  for (auto l : lam) s += static_cast<char>(l);
  s += static_cast<char>(ch.size());
  for (auto c : ch) s += static_cast<char>(c);
  return s;
}

std::string TautMonomial::str(const RuleSet &rs) const {
  std::string s;
  if (min_class) {
    s += rs.min_class(min_class).name + "[";
    for (size_t i = 0; i < min_pts.size(); ++i)
      s += (i ? "," : "") + std::to_string(int(min_pts[i]));
    s += "]";
  }
  for (auto &[p, e] : psi)
    s += "psi" + std::to_string(int(p)) + (e > 1 ? "^" + std::to_string(int(e)) : "");
  for (auto k : kappa) s += "kappa" + std::to_string(int(k));
  for (auto l : lam) s += "lambda" + std::to_string(int(l));
  for (auto c : ch) s += "ch" + std::to_string(int(c));
  if (s.empty()) s = "1";
  return s;
}

TautMonomial mono_mul(const TautMonomial &a, const TautMonomial &b) {
  if (a.min_class && b.min_class)
    throw NoRule("mul: product of two minimal classes is not declared");
  TautMonomial r = a;
  if (b.min_class) {
    r.min_class = b.min_class;
    r.min_pts = b.min_pts;
  }
  for (auto &[p, e] : b.psi) r.set_psi(p, r.psi_at(p) + e);
  r.kappa.insert(r.kappa.end(), b.kappa.begin(), b.kappa.end());
  r.lam.insert(r.lam.end(), b.lam.begin(), b.lam.end());
  r.ch.insert(r.ch.end(), b.ch.begin(), b.ch.end());
  r.normalize();
  return r;
}

TautMonomial mono_remap(const TautMonomial &m, const std::vector<int> &perm) {
  TautMonomial r = m;
  for (auto &[p, e] : r.psi) {
    int q = perm.at(p);
    if (q < 0) throw NoRule("mono_remap: psi class at a vanishing point");
    p = static_cast<uint8_t>(q);
  }
  for (auto &p : r.min_pts) {
    int q = perm.at(p);
    if (q < 0) throw NoRule("mono_remap: distinguished point vanishes");
    p = static_cast<uint8_t>(q);
  }
  r.normalize();
  return r;
}

std::vector<RuleTerm> chi_expand(const TautMonomial &m, const RuleSet &rs, int g, int n) {
  (void)n;
  if (g < 1) throw NoRule("chi: vertex genus must be >= 1");
  if (m.min_class) return {}; // minimal classes die under every expansion
  TautMonomial r = m; // psi/kappa/ch pass through; points keep indices
  int hshift = 0;
  std::vector<uint8_t> keep;
  for (auto l : m.lam) {
    if (l > g - 1) return {}; // lambda_g restricts to zero
    keep.push_back(l);
  }
  r.lam = keep;
  r.normalize();
  return {{r, Q(1), hshift}};
}

std::vector<SplitTerm> delta_split(const TautMonomial &m, const RuleSet &rs, int g, int n,
                                   const std::vector<int> &side, const std::vector<int> &posL,
                                   const std::vector<int> &posR, int gL, int gR, int newL,
                                   int newR) {
  (void)n;
  (void)newL;
  // start with unit (x) unit and multiply in each generator's image
  std::vector<SplitTerm> acc = {{TautMonomial{}, TautMonomial{}, Q(1), 0}};

  auto mul_into = [&](const std::vector<SplitTerm> &factors) {
    std::vector<SplitTerm> next;
    for (auto &t : acc)
      for (auto &f : factors)
        next.push_back({mono_mul(t.left, f.left), mono_mul(t.right, f.right),
                        t.coeff * f.coeff, t.hshift + f.hshift});
    acc = std::move(next);
  };

  for (auto &[p, e] : m.psi) {
    TautMonomial ml, mr;
    if (side[p] == 0)
      ml.set_psi(posL[p], e);
    else
      mr.set_psi(posR[p], e);
    mul_into({{ml, mr, Q(1), 0}});
  }
  for (auto k : m.kappa) {
    TautMonomial ml, mr;
    ml.kappa = {k};
    mr.kappa = {k};
    mul_into({{ml, TautMonomial{}, Q(1), 0}, {TautMonomial{}, mr, Q(1), 0}});
  }
  for (auto c : m.ch) {
    TautMonomial ml, mr;
    ml.ch = {c};
    mr.ch = {c};
    mul_into({{ml, TautMonomial{}, Q(1), 0}, {TautMonomial{}, mr, Q(1), 0}});
  }
  for (auto l : m.lam) {
    // Whitney: lambda_i -> sum_{p+q=i} lambda_p (x) lambda_q, truncated by
    // the side genera (lambda_p = 0 for p > g of the side)
    std::vector<SplitTerm> fac;
    for (int p = 0; p <= int(l); ++p) {
      int q = int(l) - p;
      if (p > gL || q > gR) continue;
      TautMonomial ml, mr;
      if (p > 0) ml.lam = {static_cast<uint8_t>(p)};
      if (q > 0) mr.lam = {static_cast<uint8_t>(q)};
      fac.push_back({ml, mr, Q(1), 0});
    }
    if (fac.empty()) return {};
    mul_into(fac);
  }
  if (m.min_class) {
    const auto &mc = rs.min_class(m.min_class);
    // nonzero only when one side is the whole registered space: genus-0 side
    // carries none or exactly one distinguished point
    int zero_side;
    if (gL == 0 && gR == mc.h)
      zero_side = 0;
    else if (gR == 0 && gL == mc.h)
      zero_side = 1;
    else
      return {};
    std::vector<uint8_t> on_zero;
    for (auto p : m.min_pts)
      if (side[p] == zero_side) on_zero.push_back(p);
    if (on_zero.size() > 1) return {};
    TautMonomial ml, mr;
    TautMonomial &full = (zero_side == 0) ? mr : ml;
    const std::vector<int> &pos_full = (zero_side == 0) ? posR : posL;
    full.min_class = m.min_class;
    for (auto p : m.min_pts)
      if (side[p] != zero_side) full.min_pts.push_back(static_cast<uint8_t>(pos_full[p]));
    if (on_zero.size() == 1) {
      // the glued point of the full side takes over the distinguished role
      int np = (zero_side == 0) ? newR : newL;
      full.min_pts.push_back(static_cast<uint8_t>(np));
    }
    full.normalize();
    mul_into({{ml, mr, Q(1), 0}});
  }
  return acc;
}

std::vector<RuleTerm> push_forget(const TautMonomial &m, const RuleSet &rs, int g, int n,
                                  int pt) {
  const int a1 = m.psi_at(pt);
  if (a1 < 1) throw NoRule("push_forget: needs psi exponent >= 1 at the forgotten point");
  if (m.min_class) {
    for (auto p : m.min_pts)
      if (p == pt) throw NoRule("push_forget: distinguished point of a minimal class");
  }

  // point relabeling after forgetting pt
  std::vector<int> perm(n, -1);
  for (int p = 0, q = 0; p < n; ++p)
    if (p != pt) perm[p] = q++;

  TautMonomial base = m;
  base.set_psi(pt, 0);
  std::vector<uint16_t> kappas = base.kappa;
  base.kappa.clear();

  // kappa_b upstairs = pi^* kappa_b + psi_pt^b; expand over subset choices
  std::vector<RuleTerm> out;
  const int nk = static_cast<int>(kappas.size());
  for (int mask = 0; mask < (1 << nk); ++mask) {
    TautMonomial t = base;
    int extra = 0;
    for (int i = 0; i < nk; ++i) {
      if (mask & (1 << i))
        extra += kappas[i];
      else
        t.kappa.push_back(kappas[i]);
    }
    const int a = a1 + extra - 1; // pushforward of psi^{a+1}
    TautMonomial r = mono_remap(t, perm);
    if (a == 0) {
      out.push_back({r, Q(2 * g - 2 + (n - 1)), 0});
    } else {
      r.kappa.push_back(static_cast<uint16_t>(a));
      r.normalize();
      out.push_back({r, Q(1), 0});
    }
  }
  return out;
}

std::vector<RuleTerm> lambda_hbar(int g) {
  std::vector<RuleTerm> out;
  for (int i = 0; i <= g; ++i) {
    TautMonomial m;
    if (i > 0) m.lam = {static_cast<uint8_t>(i)};
    out.push_back({m, Q(1), g - i});
  }
  return out;
}

std::vector<std::pair<TautMonomial, Q>> chern_exp_coefficient(int i) {
  // exp(sum_j (2j)! s^{2j+1} ch_{2j+1}); collect the s^i part
  // iterate partitions of i into odd parts
  std::vector<std::pair<TautMonomial, Q>> out;
  std::vector<int> parts;
  std::function<void(int, int)> rec = [&](int rem, int maxp) {
    if (rem == 0) {
      TautMonomial m;
      Q c = 1;
      std::map<int, int> mult;
      for (int p : parts) {
        m.ch.push_back(static_cast<uint8_t>(p));
        int j = (p - 1) / 2;
        c *= factorial(2 * j); // (2j)! per letter
        mult[p]++;
      }
      for (auto &[p, k] : mult) c /= factorial(k); // exp denominator
      m.normalize();
      out.push_back({m, c});
      return;
    }
    int start = std::min(rem, maxp);
    if (start % 2 == 0) --start;
    for (int p = start; p >= 1; p -= 2) {
      parts.push_back(p);
      rec(rem - p, p);
      parts.pop_back();
    }
  };
  rec(i, i);
  return out;
}

Q chern_exp_match(const std::vector<std::pair<TautMonomial, Q>> &terms, int i) {
  auto pattern = chern_exp_coefficient(i);
  if (pattern.empty()) {
    if (!terms.empty()) throw NoRule("chern rewrite: no pattern at this degree");
    return 0;
  }
  std::map<std::string, Q> got;
  for (auto &[m, c] : terms) got[m.encode()] += c;
  for (auto it = got.begin(); it != got.end();)
    it = (it->second == 0) ? got.erase(it) : std::next(it);
  if (got.empty()) return 0;
  // proportionality against the pattern
  Q scale = 0;
  std::map<std::string, Q> want;
  for (auto &[m, c] : pattern) want[m.encode()] += c;
  if (got.size() != want.size()) throw NoRule("chern rewrite: shape mismatch");
  for (auto &[k, c] : want) {
    auto it = got.find(k);
    if (it == got.end()) throw NoRule("chern rewrite: monomial mismatch");
    Q r = it->second / c;
    if (scale == 0)
      scale = r;
    else if (scale != r)
      throw NoRule("chern rewrite: input is not proportional to the exponential pattern");
  }
  return scale;
}

} // namespace taut
