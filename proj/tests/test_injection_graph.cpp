#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "univdyn/error.hpp"
#include "univdyn/injection_graph.hpp"
#include "univdyn/pairing.hpp"

using namespace univdyn;
using namespace univdyn::injection;

namespace {

// Hand-rolled pairing used as the oracle for layout values.
std::uint64_t pair_oracle(std::uint64_t a, std::uint64_t b) { return (a + b) * (a + b + 1) / 2 + b; }

std::map<Index, Index> chain(Index from, Index to) {
  std::map<Index, Index> m;
  for (Index i = from; i < to; ++i) m[i] = i + 1;
  return m;
}

}  // namespace

TEST_CASE("pairing matches the closed form and round-trips") {
  for (std::uint64_t a = 0; a < 60; ++a) {
    for (std::uint64_t b = 0; b < 60; ++b) {
      auto p = cantor_pair(a, b);
      CHECK(p == pair_oracle(a, b));
      CHECK(cantor_unpair(p) == std::make_pair(a, b));
    }
  }
  for (std::int64_t p = -50; p <= 50; ++p) CHECK(unzigzag(zigzag(p)) == p);
  CHECK(zigzag(-1) == 1);
  CHECK(zigzag(1) == 2);
  CHECK_THROWS_AS(cantor_pair(1ull << 40, 1ull << 40), Error);
}

TEST_CASE("layout decode/encode round trip on a grid") {
  for (Index tau = 0; tau < 12; ++tau) {
    for (Index j = 0; j < 12; ++j) {
      for (Index q = 0; q < 12; ++q) {
        LayoutAddress a{tau, j, q};
        CHECK(decode(encode(a)) == a);
      }
    }
  }
}

TEST_CASE("mu_successor worked values") {
  // pair(2,0)=3, pair(3,0)=6: the first length-1 cycle is the fixed point 6
  CHECK(pair_oracle(2, 0) == 3);
  CHECK(pair_oracle(3, 0) == 6);
  CHECK(mu_successor(6) == 6);
  // ray tau=1, j=0: pair(1,0)=1, pair(1,1)=4, pair(1,2)=8
  CHECK(mu_successor(1) == 4);
  CHECK(mu_successor(4) == 8);
  // line tau=0, j=0: positions -1 -> 0 -> 1 are q = 1, 0, 2
  CHECK(mu_successor(2) == 0);
  CHECK(mu_successor(0) == 5);
  // length-2 cycle tau=3, j=0: pair(6,0)=21, pair(6,1)=29
  CHECK(mu_successor(21) == 29);
  CHECK(mu_successor(29) == 21);
}

TEST_CASE("mu rejects cycle positions out of range") {
  // tau=2 (length 1), j=0, q=1
  Index bad = encode({2, 0, 1});
  CHECK_FALSE(is_valid_index(bad));
  try {
    mu_successor(bad);
    FAIL("expected InvalidIndex");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidIndex);
  }
}

TEST_CASE("mu is injective and type-preserving on a finite range") {
  std::map<Index, Index> seen;
  for (Index i = 0; i < 20000; ++i) {
    if (!is_valid_index(i)) continue;
    Index m = mu_successor(i);
    CHECK(is_valid_index(m));
    auto [it, inserted] = seen.emplace(m, i);
    CHECK(inserted);
    CHECK(decode(m).tau == decode(i).tau);
    CHECK(decode(m).copy == decode(i).copy);
  }
}

TEST_CASE("component shapes are what tau codes") {
  for (Index j = 0; j < 10; ++j) {
    for (Index tau = 2; tau < 9; ++tau) {
      Index start = encode({tau, j, 0});
      Index cur = start;
      for (Index step = 0; step < tau - 1; ++step) {
        cur = mu_successor(cur);
        if (step + 1 < tau - 1) CHECK(cur != start);
      }
      CHECK(cur == start);
    }
    for (Index tau = 0; tau < 2; ++tau) {
      std::set<Index> visited;
      Index cur = encode({tau, j, 0});
      for (int step = 0; step < 200; ++step) {
        CHECK(visited.insert(cur).second);
        cur = mu_successor(cur);
      }
    }
  }
}

TEST_CASE("classify_components examples") {
  SUBCASE("two-cycle") {
    auto r = classify_components(PartialInjection({{0, 1}, {1, 0}}), 10);
    REQUIRE(r.size() == 1);
    CHECK(r[0].type == ComponentType::cycle(2));
    CHECK(r[0].members == std::vector<Index>{0, 1});
  }
  SUBCASE("declared ray") {
    std::map<Index, OracleEntry> oracle{{0, OracleEntry{0, ComponentType::ray(), 0}}};
    auto r = classify_components(PartialInjection(chain(0, 10), oracle), 100);
    REQUIRE(r.size() == 1);
    CHECK(r[0].type == ComponentType::ray());
  }
  SUBCASE("finite path without oracle is unresolved") {
    auto r = classify_components(PartialInjection(chain(0, 10)), 100);
    REQUIRE(r.size() == 1);
    CHECK_FALSE(r[0].type.has_value());
  }
  SUBCASE("cycle longer than depth stays unresolved") {
    auto r = classify_components(PartialInjection({{0, 1}, {1, 2}, {2, 0}}), 2);
    CHECK_FALSE(r[0].type.has_value());
  }
}

TEST_CASE("oracle consistency is enforced") {
  std::map<Index, OracleEntry> root_with_preimage{{1, OracleEntry{1, ComponentType::ray(), 0}}};
  CHECK_THROWS_AS(PartialInjection(chain(0, 5), root_with_preimage), Error);
  std::map<Index, OracleEntry> bad_offsets{{0, OracleEntry{0, ComponentType::line(), 0}},
                                           {3, OracleEntry{0, ComponentType::line(), 7}}};
  CHECK_THROWS_AS(PartialInjection(chain(0, 5), bad_offsets), Error);
  std::map<Index, OracleEntry> short_cycle{{0, OracleEntry{0, ComponentType::cycle(3), 0}}};
  CHECK_THROWS_AS(PartialInjection(chain(0, 5), short_cycle), Error);
}

TEST_CASE("embed_injection examples") {
  SUBCASE("two-cycle lands on the first length-2 cycle") {
    PartialInjection sigma({{0, 1}, {1, 0}});
    auto cert = embed_injection(sigma, 10);
    CHECK(cert.pi_a() == std::map<Index, Index>{{0, 21}, {1, 29}});
    REQUIRE(cert.components().size() == 1);
    CHECK(cert.components()[0].claim == ClaimedComponent{3, 0});
    CHECK(cert.components()[0].resolved);
    CHECK(*cert.preimage(mu_successor(21)) == 1);
    CHECK(cert.verify(sigma).ok);
  }
  SUBCASE("identity on 0..9") {
    std::map<Index, Index> id;
    for (Index i = 0; i < 10; ++i) id[i] = i;
    PartialInjection sigma(id);
    auto cert = embed_injection(sigma, 10);
    for (Index i = 0; i < 10; ++i) CHECK(*cert.image(i) == pair_oracle(pair_oracle(2, i), 0));
    CHECK(cert.components().size() == 10);
    for (const auto& c : cert.components()) CHECK(c.resolved);
    CHECK(cert.verify(sigma).ok);
  }
  SUBCASE("unresolved path goes onto a line copy") {
    PartialInjection sigma(chain(0, 20));
    auto cert = embed_injection(sigma, 0);
    REQUIRE(cert.components().size() == 1);
    CHECK(cert.components()[0].claim == ClaimedComponent{0, 0});
    CHECK_FALSE(cert.components()[0].resolved);
    // walk the line copy directly
    Index cur = pair_oracle(0, 0);
    for (Index i = 0; i <= 20; ++i) {
      CHECK(*cert.image(i) == cur);
      cur = mu_successor(cur);
    }
    auto v = cert.verify(sigma);
    CHECK(v.ok);
    CHECK(v.edges_checked == 20);
  }
  SUBCASE("declared ray lands on a ray copy") {
    std::map<Index, OracleEntry> oracle{{0, OracleEntry{0, ComponentType::ray(), 0}}};
    PartialInjection sigma(chain(0, 10), oracle);
    auto cert = embed_injection(sigma, 10);
    CHECK(*cert.image(0) == 1);
    CHECK(*cert.image(1) == 4);
    CHECK(cert.components()[0].resolved);
    CHECK(cert.verify(sigma).ok);
  }
}

TEST_CASE("embedding rejects non-injective input") {
  try {
    PartialInjection({{0, 2}, {1, 2}});
    FAIL("expected NotInjective");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInjective);
  }
}

TEST_CASE("certificate verification catches a tampered map") {
  PartialInjection sigma({{0, 1}, {1, 2}});
  auto cert = embed_injection(sigma, 10);
  auto pi = cert.pi_a();
  std::swap(pi[1], pi[2]);
  EmbeddingCertificate tampered(pi, cert.components());
  CHECK_FALSE(tampered.verify(sigma).ok);
}

TEST_CASE("every permutation of {0..7} embeds") {
  std::vector<Index> perm(8);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t count = 0;
  do {
    std::map<Index, Index> m;
    for (Index i = 0; i < 8; ++i) m[i] = perm[i];
    PartialInjection sigma(m);
    auto v = embed_injection(sigma, 8).verify(sigma);
    REQUIRE(v.ok);
    CHECK(v.edges_checked == 8);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(count == 40320);
}

TEST_CASE("text format round trip") {
  const char* text =
      "# random comment\n"
      "# component 0: ray\n"
      "0 -> 1\n"
      "1 -> 2\n"
      "\n"
      "5 -> 5\n";
  auto sigma = parse_injection_text(text);
  CHECK(sigma.size() == 3);
  CHECK(sigma.oracle().at(0).type == ComponentType::ray());
  auto again = parse_injection_text(to_text(sigma));
  CHECK(again.entries() == sigma.entries());
  CHECK(again.oracle().size() == 1);
  CHECK_THROWS_AS(parse_injection_text("0 => 1\n"), Error);
  CHECK_THROWS_AS(parse_injection_text("# component 3: spiral\n"), Error);
}
