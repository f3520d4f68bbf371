#include <random>

#include "doctest.h"
#include "univdyn/error.hpp"
#include "univdyn/invariant.hpp"

using namespace univdyn;
using namespace univdyn::invariant;

namespace {

std::string message_of(const std::function<void()>& f, ErrorCode expected) {
  try {
    f();
  } catch (const Error& e) {
    CHECK(e.code() == expected);
    return e.what();
  }
  FAIL("no error raised");
  return {};
}

std::vector<Rational> dyadic_z(std::size_t n) {
  std::vector<Rational> z{Rational(0)};
  for (std::size_t i = 0; i < n; ++i) z.push_back(pow2_neg(i));
  return z;
}

}  // namespace

TEST_CASE("identity fixes a point") {
  auto id = lift::identity_map(covers::interval_system());
  auto tw = invariant_refinement_tower(id, {Rational(0)}, {}, 6);
  REQUIRE(tw.depth() == 6);
  for (std::size_t j = 1; j <= 6; ++j) {
    REQUIRE(tw.levels[j].cells.size() == 1);
    const auto& c = tw.levels[j].cells[0];
    CHECK(c.lo < 0);
    CHECK(c.hi > 0);
    CHECK(c.hi - c.lo < pow2_neg(j));
  }
  CHECK(certify_tower(id, tw).ok());
}

TEST_CASE("halving map on dyadic points") {
  auto half = lift::affine_map(Rational(1, 2), 0);
  auto tw = invariant_refinement_tower(half, dyadic_z(9), {pow2_neg(8)}, 6);
  auto cert = certify_tower(half, tw);
  CHECK_MESSAGE(cert.disjoint.ok, cert.disjoint.witness);
  CHECK_MESSAGE(cert.diameter.ok, cert.diameter.witness);
  CHECK_MESSAGE(cert.covering.ok, cert.covering.witness);
  CHECK_MESSAGE(cert.containment.ok, cert.containment.witness);
  CHECK_MESSAGE(cert.nesting.ok, cert.nesting.witness);
  CHECK(cert.containment.checked == 6 * 9);

  // direct oracle: x/2 maps (a, b) onto (a/2, b/2)
  for (std::size_t j = 1; j <= 6; ++j) {
    const auto& cells = tw.levels[j].cells;
    const auto& prev = tw.levels[j - 1].cells;
    REQUIRE(cells.size() == 10);
    for (std::size_t n = 0; n < cells.size(); ++n) {
      CHECK(cells[n].hi - cells[n].lo < pow2_neg(j));
      if (n + 1 < cells.size()) CHECK(cells[n].hi <= cells[n + 1].lo);
      if (tw.z[n] == pow2_neg(8)) continue;
      Rational a = rmax(Rational(0), cells[n].lo) / 2, b = rmin(Rational(1), cells[n].hi) / 2;
      bool inside = false;
      for (const auto& p : prev) inside = inside || (p.lo < a && b < p.hi);
      CHECK(inside);
    }
  }

  for (const auto& x : tw.z) CHECK(tw.in_partial_intersection(x, 6));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    Rational x = Rational(static_cast<long>(rng() % 100000)) / 99999;
    for (std::size_t j = 1; j <= 6; ++j) {
      if (tw.in_partial_intersection(x, j)) CHECK(tw.in_partial_intersection(x, j - 1));
    }
  }
  CHECK(to_string(tw).find("level 6") != std::string::npos);
  CHECK(render_tree(tw).find("U6_9") != std::string::npos);
}

TEST_CASE("tent map with two fixed points") {
  auto tent = lift::tent_map();
  auto tw = invariant_refinement_tower(tent, {Rational(0), Rational(2, 3)}, {}, 6);
  CHECK(certify_tower(tent, tw).ok());
}

TEST_CASE("rejections") {
  auto sq = lift::square_map();
  auto msg = message_of([&] { invariant_refinement_tower(sq, {Rational(1, 3)}, {}, 3); }, ErrorCode::NotInvariant);
  CHECK(msg.find("1/9") != std::string::npos);

  auto half = lift::affine_map(Rational(1, 2), 0);
  msg = message_of([&] { invariant_refinement_tower(half, dyadic_z(9), {}, 3); }, ErrorCode::NotInvariant);
  CHECK(msg.find("1/256") != std::string::npos);

  auto lax = half;
  lax.modulus = [](const Rational&) { return Rational(1); };
  message_of([&] { invariant_refinement_tower(lax, dyadic_z(9), {pow2_neg(8)}, 2); }, ErrorCode::ModulusTooCoarse);
}

TEST_CASE("certificate catches tampering") {
  auto half = lift::affine_map(Rational(1, 2), 0);
  auto tw = invariant_refinement_tower(half, dyadic_z(5), {pow2_neg(4)}, 4);
  REQUIRE(certify_tower(half, tw).ok());
  auto wide = tw;
  wide.levels[3].cells[2].hi += Rational(1, 4);
  auto cert = certify_tower(half, wide);
  CHECK_FALSE(cert.diameter.ok);
  CHECK_FALSE(cert.disjoint.ok);
  auto gone = tw;
  gone.levels[2].cells.pop_back();
  CHECK_FALSE(certify_tower(half, gone).covering.ok);
  auto shifted = tw;
  shifted.levels[1].cells[1] = OpenCell{Rational(1, 3), Rational(1, 3) + Rational(1, 8)};
  auto c2 = certify_tower(half, shifted);
  CHECK_FALSE((c2.containment.ok && c2.covering.ok && c2.nesting.ok));
}
