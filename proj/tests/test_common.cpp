#include <random>

#include "doctest.h"
#include "univdyn/common.hpp"
#include "univdyn/error.hpp"
#include "univdyn/pairing.hpp"

using namespace univdyn;
using namespace univdyn::common;
using symbolic::SymbolicSpace;
using symbolic::Symbol;
using symbolic::Word;

namespace {

Word random_word(std::mt19937_64& rng, std::size_t len, Symbol arity) {
  std::uniform_int_distribution<Symbol> d(0, arity - 1);
  Word w(len);
  for (auto& x : w) x = d(rng);
  return w;
}

Rational value(const Region& r) { return std::get<covers::Interval>(r[0]).lo; }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InconsistentOracle;
}

}  // namespace

TEST_CASE("family_lift") {
  SUBCASE("identity") {
    auto cs = covers::cantor_system();
    auto fl = family_lift(MapFamily::finite("id", {lift::identity_map(cs)}), 8, 8, 20, 1);
    REQUIRE(fl.members.size() == 1);
    std::mt19937_64 rng(2);
    Word a = random_word(rng, 20, 2);
    CHECK(fl.members[0].transducer.evaluate(a, 8) == Word(a.begin(), a.begin() + 8));
    CHECK(fl.members[0].certificate.ok);
  }
  SUBCASE("square and tent") {
    auto fl = family_lift(MapFamily::finite("pw", {lift::square_map(), lift::tent_map()}), 8, 8, 40, 3);
    REQUIRE(fl.members.size() == 2);
    for (const auto& m : fl.members) CHECK_MESSAGE(m.certificate.ok, m.certificate.witness);
  }
  SUBCASE("rotations") {
    auto fam = MapFamily::sampled(lift::rotation_family(), {Word{1}, Word{0, 1, 1}, Word{1, 0, 1, 0, 1}});
    auto fl = family_lift(fam, 6, 6, 100, 4);
    REQUIRE(fl.members.size() == 3);
    for (const auto& m : fl.members) {
      CHECK_MESSAGE(m.certificate.ok, m.certificate.witness);
      CHECK(m.certificate.samples == 100);
    }
  }
  CHECK(code_of([] { MapFamily::finite("none", {}); }) == ErrorCode::EmptyFamily);
}

TEST_CASE("universal map on tuples") {
  auto cantor = SymbolicSpace::cantor();
  std::mt19937_64 rng(5);
  SUBCASE("identity family") {
    auto un = universal_on_functions(cantor, {symbolic::identity_transducer(cantor)});
    for (int n = 0; n < 10; ++n) {
      Word w = random_word(rng, 60, 2);
      CHECK(un.u.evaluate(w, 30) == Word(w.begin(), w.begin() + 30));
    }
  }
  SUBCASE("shift and identity") {
    auto un = universal_on_functions(cantor, {symbolic::shift_transducer(cantor), symbolic::identity_transducer(cantor)});
    std::vector<Word> samples;
    for (int n = 0; n < 20; ++n) samples.push_back(random_word(rng, 400, 2));
    for (const auto& w : samples) {
      // pi_shift U(w): stream 0 of the output; by hand it is stream 0 of w shifted
      Word s0 = symbolic::stream_of(w, 0);
      Word out = un.u.evaluate(w, un.projections[0].modulus(8));
      Word lhs = symbolic::stream_of(out, 0);
      lhs.resize(8);
      CHECK(lhs == Word(s0.begin() + 1, s0.begin() + 9));
    }
    auto rep = check_universal_diagrams(un, samples, 8);
    CHECK_MESSAGE(rep.ok, rep.witness);
    // constant tuple (x, x) goes to (shift x, x)
    Word x = random_word(rng, 40, 2);
    Word z = symbolic::interleave_pack_to_length({x, x}, 0, 300);
    Word out = un.u.evaluate(z, 100);
    auto parts = symbolic::interleave_unpack(out, 2);
    for (std::size_t i = 0; i < std::min<std::size_t>(parts[0].size(), 10); ++i) CHECK(parts[0][i] == x[i + 1]);
    for (std::size_t i = 0; i < std::min<std::size_t>(parts[1].size(), 10); ++i) CHECK(parts[1][i] == x[i]);
  }
  CHECK(code_of([&] { universal_on_functions(cantor, {}); }) == ErrorCode::EmptyFamily);
}

TEST_CASE("pipeline on N^N") {
  SUBCASE("empty") {
    auto ce = common_extension_baire({}, 4, 5, 1);
    Word w{3, 1, 4, 1, 5};
    CHECK(ce.u.evaluate(w, 5) == w);
    auto cert = certify_common_extension(ce, 5, 1);
    CHECK(cert.ok);
    CHECK(cert.diagrams.empty());
  }
  SUBCASE("identity on the interval") {
    auto cs = covers::interval_system();
    auto ce = common_extension_baire({MapFamily::finite("id", {lift::identity_map(cs)})}, 4, 10, 2);
    auto cert = certify_common_extension(ce, 10, 3);
    CHECK(cert.ok);
    REQUIRE(cert.diagrams.size() == 1);
  }
  SUBCASE("two pieces, five members") {
    std::vector<MapFamily> pieces{
        MapFamily::finite("pw", {lift::square_map(), lift::tent_map()}),
        MapFamily::sampled(lift::rotation_family(), {Word{1}, Word{0, 1, 1}, Word{1, 1, 0, 1}}),
    };
    auto ce = common_extension_baire(pieces, 5, 10, 7);
    for (const auto& stage : ce.pieces) {
      for (const auto& m : stage.lift.members) CHECK_MESSAGE(m.certificate.ok, m.certificate.witness);
    }
    auto cert = certify_common_extension(ce, 3, 8);
    REQUIRE(cert.diagrams.size() == 5);
    for (const auto& d : cert.diagrams) {
      CHECK_MESSAGE(d.ok, d.name << ": " << d.witness);
      CHECK(d.checked == 3);
    }
  }
  CHECK(pipeline_output_length({2, 3}, 6) == cantor_pair(1, cantor_pair(2, 5)) + 1);
}

TEST_CASE("contraction fixed points") {
  auto half = lift::affine_map(Rational(1, 2), 0);
  auto fp = contraction_fixed_point(half, Rational(1, 2), covers::point_region(1), Rational(1, 1000));
  CHECK(abs(value(fp.value)) <= Rational(1, 1000));
  CHECK(fp.error_bound <= Rational(1, 1000));
  auto shifted = lift::affine_map(Rational(1, 2), Rational(1, 4));
  fp = contraction_fixed_point(shifted, Rational(1, 2), covers::point_region(0), Rational(1, 4096));
  CHECK(abs(value(fp.value) - Rational(1, 2)) <= Rational(1, 4096));
  auto id = lift::identity_map(covers::interval_system());
  CHECK(code_of([&] { contraction_fixed_point(id, Rational(1, 2), covers::point_region(0), Rational(1, 8)); }) ==
        ErrorCode::LipschitzRefuted);
}

TEST_CASE("controlled powers") {
  auto fam = std::vector<lift::PointMap>{lift::affine_map(Rational(1, 2), 0), lift::affine_map(Rational(1, 2), Rational(1, 4))};
  auto cert = controlled_powers_check(fam, Rational(1, 2), 16, 12);
  CHECK(cert.status == PowersCertificate::Status::Certified);
  REQUIRE(cert.schedule.size() == 13);
  for (std::size_t i = 0; i <= 12; ++i) CHECK(cert.schedule[i] == pow2_neg(i));

  Rational theta(1, 8), delta(1, 64);
  auto rot = controlled_powers_check({lift::rotation_map(theta), lift::rotation_map(theta + delta)}, std::nullopt, 8, 64);
  CHECK(rot.status == PowersCertificate::Status::Falsified);
  REQUIRE(rot.witness);
  CHECK(rot.witness->i == 32);  // floor(1 / (2 delta))
  CHECK(rot.witness->power_distance == Rational(1, 2));
  CHECK(rot.witness->map_distance == delta);

  auto single = controlled_powers_check({lift::square_map()}, std::nullopt, 8, 10);
  CHECK(single.status == PowersCertificate::Status::Certified);
  for (std::size_t i = 1; i < single.schedule.size(); ++i) CHECK(single.schedule[i] <= single.schedule[i - 1]);
}

TEST_CASE("compact model of a contractive family") {
  auto cs = covers::interval_system();
  auto net = uniform_net(*cs, Rational(1, 4));
  REQUIRE(net.size() == 5);
  SUBCASE("one map") {
    auto model = contractive_common_extension(cs, {lift::affine_map(Rational(1, 2), 0)}, Rational(1, 2), 10, net,
                                              Rational(1, 4));
    CHECK(model.defect <= pow2_neg(10));
    CHECK(model.defect_bound == pow2_neg(10));
    CHECK(model.surjectivity.ok);
    CHECK(model.diagrams.ok);
    // direct orbit tabulation
    for (std::size_t i = 0; i <= 10; ++i) {
      for (std::size_t a = 0; a < 5; ++a) CHECK(value(model.orbit[i][a][0]) == Rational(static_cast<long>(a)) / 4 * pow2_neg(i));
    }
    CHECK(invariant_witness_check(*cs, model.family, model.elements(), model.defect_bound, Rational(1, 4)).ok);
    // constants at the net points are not invariant under x/2
    std::vector<Tabulated> constants;
    for (const auto& a : net) constants.push_back({a});
    CHECK_FALSE(invariant_witness_check(*cs, model.family, constants, Rational(1, 1024), Rational(1, 4)).ok);
  }
  SUBCASE("two maps") {
    std::vector<lift::PointMap> fam{lift::affine_map(Rational(1, 2), 0), lift::affine_map(Rational(1, 2), Rational(1, 4))};
    auto model = contractive_common_extension(cs, fam, Rational(1, 2), 10, net, Rational(1, 4));
    CHECK(abs(value(model.alpha[0])) <= model.fixed_point_tol);
    CHECK(abs(value(model.alpha[1]) - Rational(1, 2)) <= model.fixed_point_tol);
    CHECK(model.diagrams.ok);
    CHECK(model.diagrams.checked == 10 * 5 * 2);
    CHECK(model.defect <= model.defect_bound);
    CHECK(invariant_witness_check(*cs, fam, model.elements(), model.defect_bound, Rational(1, 4)).ok);
    std::vector<Tabulated> constants;
    for (const auto& a : net) constants.push_back({a, a});
    CHECK_FALSE(invariant_witness_check(*cs, fam, constants, Rational(1, 1024), Rational(1, 4)).ok);
    CHECK_FALSE(invariant_witness_check(*cs, fam, {}, Rational(1), Rational(1)).ok);
  }
  SUBCASE("finite space") {
    auto fin = covers::make_cover_system("finite:[[0,1,2],[1,0,1],[2,1,0]]");
    auto squash = lift::finite_map(fin, {0, 0, 1});
    CHECK(*squash.lipschitz == 1);
    auto to_zero = lift::finite_map(fin, {0, 0, 0});
    auto all = uniform_net(*fin, 1);
    auto model = contractive_common_extension(fin, {to_zero}, Rational(1, 2), 4, all, Rational(1, 2));
    CHECK(model.surjectivity.ok);
    CHECK(model.defect == 0);
    CHECK(code_of([&] { contractive_common_extension(fin, {squash}, Rational(1, 2), 4, all, Rational(1, 2)); }) ==
          ErrorCode::LipschitzRefuted);
  }
  CHECK(code_of([&] {
          contractive_common_extension(cs, {lift::affine_map(Rational(1, 2), 0)}, Rational(1, 2), 4,
                                       {covers::point_region(0)}, Rational(1, 4));
        }) == ErrorCode::NetTooCoarse);
}
