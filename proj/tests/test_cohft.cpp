#include <doctest.h>

#include "taut/cohft.hpp"

using namespace taut;

namespace {

Ctx ctx_for(const SymVectorSpace &A, int filt = 6) {
  Ctx ctx;
  ctx.A = A;
  ctx.trunc.filt_max = filt;
  ctx.trunc.hbar_max = 3;
  ctx.trunc.vertex_max = 4;
  return ctx;
}

} // namespace

TEST_CASE("frobenius validation and correlators") {
  FrobeniusData F = rank_one_frobenius();
  F.validate();
  CHECK(F.correlator(0, {0, 0, 0}) == 1);
  CHECK(F.correlator(2, {0}) == 1);
  CHECK(F.correlator(3, {}) == 1);

  FrobeniusData G = group_algebra_z2();
  G.validate();
  // handle element = 2 * unit; genus-g correlator of the unit insertion is
  // the handle power trace: 2^g
  CHECK(G.correlator(1, {0}) == 2);
  CHECK(G.correlator(2, {0}) == 4);
  CHECK(G.correlator(1, {1}) == 0);
  // gluing-pattern independence: <t t t t> at genus 0 vs composed orders
  CHECK(G.correlator(0, {1, 1, 1, 1}) == 1);
}

TEST_CASE("rank one TQFT has unit coefficients") {
  Ctx ctx = ctx_for(rank_one_space());
  ConvElement a = frobenius_tqft(ctx, rank_one_frobenius());
  for (auto &[gn, m] : a.comp)
    for (auto &[k, c] : m) CHECK(c.scalar() == 1);
  CHECK(master_residual(ctx, a).is_zero());
}

TEST_CASE("pz alpha families") {
  Ctx ctx = ctx_for(pz_space(1), 5);
  ConvElement alpha = pz_alpha(ctx, 1);
  // genus-1 all-d component: coefficient (2 - 2m) = 0 for m = 1
  for (auto &[gn, m] : alpha.comp) CHECK(gn.g == 0);
  Ctx c0 = ctx_for(pz_space(0), 5);
  ConvElement a0 = pz_alpha(c0, 0);
  bool has_g1 = false;
  for (auto &[gn, m] : a0.comp)
    if (gn.g == 1) {
      has_g1 = true;
      for (auto &[k, c] : m) CHECK(c.scalar() == 2); // 2 - 2m = 2
    }
  CHECK(has_g1);
  // (0,3) component of m=1: a d d and b c d classes
  CHECK(alpha.comp.at(GN{0, 3}).size() == 2);
}

TEST_CASE("pz lambda isotropy") {
  Ctx ctx = ctx_for(pz_space(1), 6);
  int L = ctx.rules.register_minimal("Lambda21", 2, 1, 1);
  ConvElement lam = pz_lambda(ctx, L);
  CHECK(!lam.is_zero());
  CHECK(delta_op(ctx, lam).is_zero());
  CHECK(bracket(ctx, lam, lam).is_zero());
  DParts p = d_parts(ctx, lam);
  CHECK(p.d1.is_zero()); // chi of a minimal pullback vanishes
  // full deformation: master_residual(alpha + lambda) = 0
  ConvElement alpha = pz_alpha(ctx, 1);
  CHECK(master_residual(ctx, alpha + lam).is_zero());
}

TEST_CASE("general PZ element reduces and solves") {
  // e-sector empty with the classical degrees reproduces pz_alpha(m)
  // admissible example: the 1-dim even algebra with degrees (0, 2):
  // A = <a, d>, a a = a, a d = d, d d = 0, deg a = 0, deg d = 2
  FrobeniusData F;
  F.A.dim = 2;
  F.A.parity = {0, 0};
  F.A.names = {"a", "d"};
  F.A.pair_ = {{Q(0), Q(1)}, {Q(1), Q(0)}};
  F.prod.assign(2, std::vector<std::vector<Q>>(2, std::vector<Q>(2, 0)));
  F.prod[0][0][0] = 1;
  F.prod[0][1][1] = 1;
  F.prod[1][0][1] = 1;
  F.degree = {0, 2};
  F.validate();
  Ctx ctx = ctx_for(F.A, 5);
  ConvElement gen = pz_general_alpha(ctx, F, 0, 1, {}, {}, {});
  ConvElement plain = pz_alpha(ctx_for(pz_space(0), 5), 0);
  // same shape over the rank-(2m+2)=2 space: compare residuals and classes
  CHECK(master_residual(ctx, gen).is_zero());
  CHECK(gen.term_count() == plain.term_count());
}

TEST_CASE("BR functor") {
  Ctx ctx = ctx_for(rank_one_space(), 5);
  ConvElement a = frobenius_tqft(ctx, rank_one_frobenius());
  ConvElement ah = br(ctx, a);
  CHECK(quantum_master_residual(ctx, ah).is_zero());
  // genus-0 tree graphs are unchanged
  for (auto &[gn, m] : ah.comp) {
    if (gn.g != 0) continue;
    for (auto &[k, c] : m) {
      DecGraph g = decode_graph(k);
      if (g.nedges() == 0) CHECK(c.scalar() == 1);
    }
  }
  // BR specializes the commutation relation BR(d + Delta) = (d + hbar Delta) BR
  Ctx cp = ctx_for(pz_space(1), 5);
  ConvElement x = pz_alpha(cp, 1);
  ConvElement lhs = br(cp, d_gA(cp, x) + delta_op(cp, x));
  ConvElement rhs0 = br(cp, x);
  ConvElement rhs = d_gA(cp, rhs0) + delta_op(cp, rhs0).hbar_shifted(1);
  CHECK((lhs - rhs).is_zero());
}

TEST_CASE("xi section") {
  Ctx ctx = ctx_for(rank_one_space(), 5);
  ConvElement a = frobenius_tqft(ctx, rank_one_frobenius());
  ConvElement xa = xi_map(ctx, a);
  CHECK((eval_hbar_one(xa) - a).is_zero());
  // xi is a morphism for the (d + Delta) -> (d + hbar Delta) bookkeeping
  ConvElement lhs = xi_map(ctx, d_gA(ctx, a) + delta_op(ctx, a));
  ConvElement rhs = d_gA(ctx, xa) + delta_op(ctx, xa).hbar_shifted(1);
  CHECK((lhs - rhs).is_zero());
  // and intertwines brackets
  ConvElement bl = xi_map(ctx, bracket(ctx, a, a));
  ConvElement br2 = bracket(ctx, xa, xa);
  CHECK((bl - br2).is_zero());
  // genus-0 trees unchanged
  for (auto &[gn, m] : xa.comp)
    if (gn.g == 0)
      for (auto &[k, c] : m)
        if (decode_graph(k).nedges() == 0)
          for (auto &[hs, v] : c.terms) CHECK(hs.first == 0);
}

TEST_CASE("verify cohft classification") {
  Ctx ctx = ctx_for(rank_one_space(), 4);
  ConvElement a = frobenius_tqft(ctx, rank_one_frobenius());
  CHECK(verify_cohft(ctx, a).find("TQFT") != std::string::npos);
  Ctx cp = ctx_for(pz_space(1), 4);
  int L = cp.rules.register_minimal("Lam", 2, 1, 1);
  ConvElement al = pz_alpha(cp, 1) + pz_lambda(cp, L);
  std::string rep = verify_cohft(cp, al);
  CHECK(rep.find("strict CohFT") != std::string::npos);
  CHECK(rep.find("= 0") != std::string::npos);
}
