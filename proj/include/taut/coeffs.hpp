#pragma once

// Formal coefficient system standing in for the cohomology of the moduli
// spaces of stable curves: free commutative monomials in psi, kappa, lambda,
// odd Chern characters and registered minimal classes, together with the
// declared expansion (chi), decomposition (delta) and forgetful-pushforward
// rules.  Unknown rule applications throw NoRule, never return 0 silently.

#include "taut/poly.hpp"
#include "taut/rational.hpp"

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace taut {

struct NoRule : std::runtime_error {
  explicit NoRule(const std::string &what) : std::runtime_error(what) {}
};

struct MinimalClass {
  std::string name;
  int h = 0;      // ambient genus of the registered space
  int m = 0;      // number of distinguished points
  uint8_t parity = 0;
};

struct RuleSet {
  std::vector<MinimalClass> minimal; // ids are 1-based

  int register_minimal(const std::string &name, int h, int m, uint8_t parity) {
    minimal.push_back({name, h, m, parity});
    return static_cast<int>(minimal.size());
  }
  const MinimalClass &min_class(int id) const { return minimal.at(id - 1); }
};

// One monomial at an ambient (g, n); local points are 0..n-1.
struct TautMonomial {
  int min_class = 0;                 // 0 = unit, otherwise 1-based RuleSet id
  std::vector<uint8_t> min_pts;      // distinguished points of the minimal class, sorted
  std::vector<std::pair<uint8_t, uint8_t>> psi; // (point, exp>0), sorted by point
  std::vector<uint16_t> kappa;       // sorted multiset of kappa indices (>=1)
  std::vector<uint8_t> lam;          // sorted multiset of lambda indices (>=1)
  std::vector<uint8_t> ch;           // sorted multiset of odd ch indices

  bool is_unit() const {
    return min_class == 0 && psi.empty() && kappa.empty() && lam.empty() && ch.empty();
  }
  int psi_at(int pt) const {
    for (auto &[p, e] : psi)
      if (p == pt) return e;
    return 0;
  }
  void set_psi(int pt, int exp);
  void normalize();
  int psi_degree() const {
    int d = 0;
    for (auto &[p, e] : psi) d += e;
    return d;
  }
  auto operator<=>(const TautMonomial &) const = default;
  std::string encode() const;
  std::string str(const RuleSet &rs) const;
};

inline uint8_t monomial_parity(const TautMonomial &m, const RuleSet &rs) {
  return m.min_class ? rs.min_class(m.min_class).parity : 0;
}

// term of a rule application: monomial, rational factor, hbar shift
struct RuleTerm {
  TautMonomial mono;
  Q coeff;
  int hshift = 0;
};

// free commutative product (same ambient); at most one minimal class
TautMonomial mono_mul(const TautMonomial &a, const TautMonomial &b);

// relabel local points: pt -> perm[pt]
TautMonomial mono_remap(const TautMonomial &m, const std::vector<int> &perm);

// expansion at a vertex of genus g >= 1 with n points; the two new points are
// n and n+1 of the (g-1, n+2) target.  Throws NoRule when psi sits at a
// point that would be glued (never produced by this artifact).
std::vector<RuleTerm> chi_expand(const TautMonomial &m, const RuleSet &rs, int g, int n);

struct SplitTerm {
  TautMonomial left, right;
  Q coeff;
  int hshift = 0;
};

// decomposition along a stable split: side() maps old points to 0 (left) or
// 1 (right); posL/posR give the local index of each old point on its side;
// the new glued points are newL on the left and newR on the right.
std::vector<SplitTerm> delta_split(const TautMonomial &m, const RuleSet &rs, int g, int n,
                                   const std::vector<int> &side, const std::vector<int> &posL,
                                   const std::vector<int> &posR, int gL, int gR, int newL,
                                   int newR);

// pushforward along the map forgetting point pt; requires psi exponent >= 1
// at pt.  Remaining points keep their relative order.
std::vector<RuleTerm> push_forget(const TautMonomial &m, const RuleSet &rs, int g, int n,
                                  int pt);

// the expanded Hodge element: sum_i lambda_i hbar^{g-i} (lambda_0 = unit)
std::vector<RuleTerm> lambda_hbar(int g);

// s^i coefficient of exp(sum_j (2j)! s^{2j+1} ch_{2j+1}) as ch-monomials
std::vector<std::pair<TautMonomial, Q>> chern_exp_coefficient(int i);

// rewrites a ch-polynomial (grouped by s-degree) into lambda classes;
// input: list of (ch-monomial, coeff) at fixed s-degree i; must be
// proportional to the declared exponential pattern.  Returns the scalar c
// with input = c * pattern; the rewritten class is then c*lambda_i (or 0 for
// i > g).
Q chern_exp_match(const std::vector<std::pair<TautMonomial, Q>> &terms, int i);

} // namespace taut
