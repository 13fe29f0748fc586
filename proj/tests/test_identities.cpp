#include <doctest.h>

#include "taut/cohft.hpp"
#include "taut/conv.hpp"

#include <vector>

using namespace taut;

// The structure maps satisfy the odd-bracket sign system
//   {x,y} = (-1)^{|x||y|} {y,x}
//   {{x,y},z} + (-1)^{|x|(|y|+|z|)} {{y,z},x}
//            + (-1)^{|z|(|x|+|y|)} {{z,x},y} = 0
//   D{x,y} = -{Dx,y} - (-1)^{|x|} {x,Dy}   for D = d and D = Delta
//   d^2 = Delta^2 = d Delta + Delta d = 0
// on every element; the suite samples mixed parities and multi-vertex terms.

namespace {

struct Fixture {
  Ctx ctx;
  std::vector<std::pair<ConvElement, int>> items; // (element, parity)

  Fixture() {
    ctx.A = pz_space(1);
    ctx.trunc.filt_max = 12;
    ctx.trunc.hbar_max = 4;
    ctx.trunc.vertex_max = 9;

    auto singleg = [&](int g, std::vector<int> leaves) {
      DecGraph gr;
      gr.genus = {g};
      gr.vdec = {TautMonomial{}};
      for (int x : leaves) {
        gr.leg_vertex.push_back(0);
        gr.leaf.push_back(x);
      }
      return gr;
    };
    auto elem = [&](const DecGraph &g) {
      ConvElement e;
      e.add_term(ctx, g, CoeffPoly(orbit_of(ctx, g)));
      return e;
    };
    // basis of A: b=0 (odd), a=1, d=2 (even), c=3 (odd)
    items.push_back({elem(singleg(0, {1, 2, 2})), 0});
    items.push_back({elem(singleg(0, {1, 2, 3})), 1});
    items.push_back({elem(singleg(1, {1, 2, 3})), 1});
    items.push_back({elem(singleg(0, {0, 1, 3, 2})), 0});
    std::vector<std::vector<int>> pa, pb;
    DecGraph g2 = graft(singleg(0, {1, 2, 2}), 0, singleg(0, {2, 2, 3}), 0, pa, pb);
    items.push_back({elem(g2), 0});
    DecGraph g2b = graft(singleg(0, {0, 1, 3, 2}), 1, singleg(1, {2}), 0, pa, pb);
    items.push_back({elem(g2b), 1});
  }
};

} // namespace

TEST_CASE("square zero relations") {
  Fixture F;
  for (auto &[x, p] : F.items) {
    CHECK(delta_op(F.ctx, delta_op(F.ctx, x)).is_zero());
    CHECK(d_gA(F.ctx, d_gA(F.ctx, x)).is_zero());
    ConvElement anti = d_gA(F.ctx, delta_op(F.ctx, x)) + delta_op(F.ctx, d_gA(F.ctx, x));
    CHECK(anti.is_zero());
  }
}

TEST_CASE("bracket graded symmetry") {
  Fixture F;
  for (auto &[x, px] : F.items)
    for (auto &[y, py] : F.items) {
      ConvElement lhs = bracket(F.ctx, x, y);
      ConvElement rhs = bracket(F.ctx, y, x).scaled(Q((px && py) ? -1 : 1));
      CHECK((lhs - rhs).is_zero());
    }
}

TEST_CASE("cyclic Jacobi identity") {
  Fixture F;
  auto B = [&](const ConvElement &a, const ConvElement &b) { return bracket(F.ctx, a, b); };
  const auto &it = F.items;
  for (size_t a = 0; a < it.size(); ++a)
    for (size_t b = a; b < it.size(); ++b)
      for (size_t c = b; c < it.size(); ++c) {
        auto &[x, px] = it[a];
        auto &[y, py] = it[b];
        auto &[z, pz] = it[c];
        ConvElement j1 = B(B(x, y), z);
        ConvElement j2 = B(B(y, z), x).scaled(Q((px * (py + pz)) % 2 ? -1 : 1));
        ConvElement j3 = B(B(z, x), y).scaled(Q((pz * (px + py)) % 2 ? -1 : 1));
        CHECK((j1 + j2 + j3).is_zero());
      }
}

TEST_CASE("d and Delta are anti-derivations of the bracket") {
  Fixture F;
  auto B = [&](const ConvElement &a, const ConvElement &b) { return bracket(F.ctx, a, b); };
  for (auto &[x, px] : F.items)
    for (auto &[y, py] : F.items) {
      for (int which = 0; which < 2; ++which) {
        auto D = [&](const ConvElement &v) {
          return which ? d_gA(F.ctx, v) : delta_op(F.ctx, v);
        };
        ConvElement lhs = D(B(x, y));
        ConvElement rhs = B(D(x), y).scaled(Q(-1)) + B(x, D(y)).scaled(Q(px ? 1 : -1));
        CHECK((lhs - rhs).is_zero());
      }
    }
}

TEST_CASE("gauge action preserves the master equation") {
  Ctx ctx;
  ctx.A = rank_one_space();
  ctx.trunc.filt_max = 5;
  ctx.trunc.hbar_max = 3;
  ctx.trunc.vertex_max = 4;
  ConvElement alpha = frobenius_tqft(ctx, rank_one_frobenius());
  REQUIRE(master_residual(ctx, alpha).is_zero());
  DecGraph xi1;
  xi1.genus = {0};
  xi1.vdec = {TautMonomial{}};
  for (int i = 0; i < 3; ++i) {
    xi1.leg_vertex.push_back(0);
    xi1.leaf.push_back(0);
  }
  std::vector<std::vector<int>> pa, pb;
  DecGraph xig = graft(xi1, 0, xi1, 1, pa, pb); // one odd edge
  REQUIRE(class_parity(ctx, xig) == 1);
  ConvElement xi;
  xi.add_term(ctx, xig, CoeffPoly(Q(1, 3) * orbit_of(ctx, xig)));
  ConvElement moved = gauge_act(ctx, xi, alpha, 8, false);
  CHECK(master_residual(ctx, moved).is_zero());
  // the quantum statement needs a quantum master-equation solution
  ConvElement alphah = br(ctx, alpha);
  REQUIRE(quantum_master_residual(ctx, alphah).is_zero());
  ConvElement movedq = gauge_act(ctx, xi, alphah, 8, true);
  CHECK(quantum_master_residual(ctx, movedq).is_zero());
}
