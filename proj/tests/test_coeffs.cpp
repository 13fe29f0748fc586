#include <doctest.h>

#include "taut/coeffs.hpp"

using namespace taut;

namespace {

TautMonomial unit() { return TautMonomial{}; }

TautMonomial psi(int pt, int e) {
  TautMonomial m;
  m.set_psi(pt, e);
  return m;
}

} // namespace

TEST_CASE("free multiplication") {
  RuleSet rs;
  TautMonomial mu;
  mu.kappa = {1};
  CHECK(mono_mul(unit(), mu) == mu);
  CHECK(mono_mul(psi(0, 1), psi(0, 1)) == psi(0, 2));
  TautMonomial l1;
  l1.min_class = 1;
  CHECK_THROWS_AS(mono_mul(l1, l1), NoRule);
}

TEST_CASE("chi expansion rules") {
  RuleSet rs;
  int L = rs.register_minimal("Lam", 2, 1, 1);
  // unit passes through
  auto t = chi_expand(unit(), rs, 1, 1);
  REQUIRE(t.size() == 1);
  CHECK(t[0].mono.is_unit());
  CHECK(t[0].coeff == 1);
  // minimal classes die
  TautMonomial lam;
  lam.min_class = L;
  lam.min_pts = {0};
  CHECK(chi_expand(lam, rs, 2, 3).empty());
  // the Hodge expansion: chi of sum lambda_i hbar^{g-i} equals hbar times
  // the lower one (Mumford); componentwise: lambda_g dies, others persist
  TautMonomial l2;
  l2.lam = {2};
  CHECK(chi_expand(l2, rs, 2, 1).empty());
  TautMonomial l1;
  l1.lam = {1};
  auto u = chi_expand(l1, rs, 2, 1);
  REQUIRE(u.size() == 1);
  CHECK(u[0].mono == l1);
  // psi at retained points passes through
  auto v = chi_expand(psi(0, 2), rs, 1, 3);
  REQUIRE(v.size() == 1);
  CHECK(v[0].mono == psi(0, 2));
}

TEST_CASE("delta split rules") {
  RuleSet rs;
  int L = rs.register_minimal("Lam", 2, 1, 1);
  // unit -> unit (x) unit over a (0,3)|(0,4) split of (0,5)
  std::vector<int> side = {0, 0, 1, 1, 1};
  std::vector<int> posL = {0, 1, -1, -1, -1};
  std::vector<int> posR = {-1, -1, 0, 1, 2};
  auto t = delta_split(unit(), rs, 0, 5, side, posL, posR, 0, 0, 2, 3);
  REQUIRE(t.size() == 1);
  CHECK(t[0].left.is_unit());
  CHECK(t[0].right.is_unit());
  // the minimal class itself dies under every split
  TautMonomial lam;
  lam.min_class = L;
  lam.min_pts = {0};
  // split of (2,1): (0,2)|(2,1): the zero side carries the distinguished pt
  std::vector<int> s2 = {0};
  std::vector<int> pl = {0}, pr = {-1};
  auto w = delta_split(lam, rs, 2, 1, s2, pl, pr, 0, 2, 1, 0);
  // one distinguished point on the genus-0 side: role transfers
  REQUIRE(w.size() == 1);
  CHECK(w[0].left.is_unit());
  CHECK(w[0].right.min_class == L);
  REQUIRE(w[0].right.min_pts.size() == 1);
  CHECK(w[0].right.min_pts[0] == 0); // the new glued point takes the role
  // both-positive-genus split kills the pullback
  auto w2 = delta_split(lam, rs, 2, 1, s2, pl, pr, 1, 1, 1, 0);
  CHECK(w2.empty());
  // Whitney for a bare lambda_1 across (1,*)|(1,*)
  TautMonomial l1;
  l1.lam = {1};
  auto w3 = delta_split(l1, rs, 2, 1, s2, pl, pr, 1, 1, 1, 0);
  CHECK(w3.size() == 2);
  // kappa splits as kappa (x) 1 + 1 (x) kappa
  TautMonomial k1;
  k1.kappa = {1};
  auto w4 = delta_split(k1, rs, 2, 1, s2, pl, pr, 1, 1, 1, 0);
  CHECK(w4.size() == 2);
}

TEST_CASE("pushforward rules") {
  RuleSet rs;
  // pi_*(psi_i^2) = kappa_1
  auto t = push_forget(psi(0, 2), rs, 1, 3, 0);
  REQUIRE(t.size() == 1);
  CHECK(t[0].coeff == 1);
  CHECK(t[0].mono.kappa == std::vector<uint16_t>{1});
  // pi_*(psi_i) = kappa_0 = (2g - 2 + (n-1)) as a scalar
  auto u = push_forget(psi(0, 1), rs, 1, 3, 0);
  REQUIRE(u.size() == 1);
  CHECK(u[0].mono.is_unit());
  CHECK(u[0].coeff == Q(2 * 1 - 2 + 2));
  // psi^0 is rejected
  CHECK_THROWS_AS(push_forget(unit(), rs, 1, 3, 0), NoRule);
  // kappa correction: pi_*(kappa_a psi^k) = kappa_a kappa_{k-1} + kappa_{a+k-1}
  TautMonomial m = psi(0, 2);
  m.kappa = {1};
  auto v = push_forget(m, rs, 1, 3, 0);
  CHECK(v.size() == 2);
  // other-point psi passes through with relabeling
  TautMonomial m2 = psi(1, 3);
  m2.set_psi(0, 2);
  auto w = push_forget(m2, rs, 1, 3, 0);
  REQUIRE(w.size() == 1);
  CHECK(w[0].mono.psi_at(0) == 3); // point 1 became point 0
  CHECK(w[0].mono.kappa == std::vector<uint16_t>{1});
}

TEST_CASE("hodge element") {
  CHECK(lambda_hbar(0).size() == 1);
  auto l1 = lambda_hbar(1);
  REQUIRE(l1.size() == 2);
  CHECK(l1[0].mono.is_unit());       // i = 0 term with hbar^1
  CHECK(l1[0].hshift == 1);
  CHECK(l1[1].mono.lam == std::vector<uint8_t>{1});
  CHECK(l1[1].hshift == 0);
  auto l2 = lambda_hbar(2);
  CHECK(l2.size() == 3);
}

TEST_CASE("chern exponential table") {
  // s^0: 1; s^1: ch1; s^2: ch1^2/2; s^3: ch1^3/6 + 2 ch3
  auto t0 = chern_exp_coefficient(0);
  REQUIRE(t0.size() == 1);
  CHECK(t0[0].second == 1);
  auto t1 = chern_exp_coefficient(1);
  REQUIRE(t1.size() == 1);
  CHECK(t1[0].first.ch == std::vector<uint8_t>{1});
  auto t2 = chern_exp_coefficient(2);
  REQUIRE(t2.size() == 1);
  CHECK(t2[0].second == Q(1, 2));
  auto t3 = chern_exp_coefficient(3);
  REQUIRE(t3.size() == 2);
  Q c3 = 0, c111 = 0;
  for (auto &[m, c] : t3) {
    if (m.ch.size() == 1) c3 = c;
    if (m.ch.size() == 3) c111 = c;
  }
  CHECK(c3 == 2);
  CHECK(c111 == Q(1, 6));

  // pattern matching
  auto probe = chern_exp_coefficient(3);
  for (auto &[m, c] : probe) c *= Q(5, 7);
  CHECK(chern_exp_match(probe, 3) == Q(5, 7));
  probe[0].second += 1;
  CHECK_THROWS_AS(chern_exp_match(probe, 3), NoRule);
}

TEST_CASE("degree bookkeeping") {
  RuleSet rs;
  int L = rs.register_minimal("Lam", 2, 1, 1);
  TautMonomial lam;
  lam.min_class = L;
  CHECK(monomial_parity(lam, rs) == 1);
  CHECK(monomial_parity(psi(0, 5), rs) == 0);
}
